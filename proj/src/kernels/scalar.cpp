#include <numaopt/kernels/kernels.hpp>

#include <cmath>

namespace numaopt::kernels::scalar {

void split_gains(const double* prefix_sum, const double* prefix_count, double total_sum,
                 double total_count, double* out, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double sl = prefix_sum[i];
        const double nl = prefix_count[i];
        const double sr = total_sum - sl;
        const double nr = total_count - nl;
        const double left = (sl * sl) / nl;
        const double right = (sr * sr) / nr;
        out[i] = left + right;
    }
}

void subtract(const double* a, const double* b, double* out, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] - b[i];
    }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double scaled = alpha * x[i];
        y[i] = y[i] + scaled;
    }
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::fabs(a[i] - b[i]);
    }
    return acc;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace numaopt::kernels::scalar
