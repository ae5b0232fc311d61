#include <numaopt/kernels/kernels.hpp>

#if defined(NUMAOPT_HAVE_AVX2)
#include "avx2.hpp"
#endif

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace numaopt::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NUMAOPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend detect() noexcept {
    if (const char* forced = std::getenv("NUMAOPT_KERNELS")) {
        if (std::string_view{forced} == "scalar") {
            return Backend::scalar;
        }
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() noexcept {
    static std::atomic<Backend> slot{detect()};
    return slot;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string{"kernels::"} + what + ": length mismatch");
    }
}

} // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    }
    return "unknown";
}

Backend active_backend() noexcept {
    return backend_slot().load(std::memory_order_relaxed);
}

bool backend_available(Backend b) noexcept {
    return b == Backend::scalar || (b == Backend::avx2 && cpu_has_avx2());
}

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument("kernel backend not available: " +
                                    std::string{backend_name(b)});
    }
    backend_slot().store(b, std::memory_order_relaxed);
}

void split_gains(std::span<const double> prefix_sum, std::span<const double> prefix_count,
                 double total_sum, double total_count, std::span<double> out) {
    check_sizes(prefix_sum.size(), prefix_count.size(), "split_gains");
    check_sizes(prefix_sum.size(), out.size(), "split_gains");
#if defined(NUMAOPT_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        avx2::split_gains(prefix_sum.data(), prefix_count.data(), total_sum, total_count,
                          out.data(), out.size());
        return;
    }
#endif
    scalar::split_gains(prefix_sum.data(), prefix_count.data(), total_sum, total_count,
                        out.data(), out.size());
}

void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    check_sizes(a.size(), b.size(), "subtract");
    check_sizes(a.size(), out.size(), "subtract");
#if defined(NUMAOPT_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        avx2::subtract(a.data(), b.data(), out.data(), out.size());
        return;
    }
#endif
    scalar::subtract(a.data(), b.data(), out.data(), out.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    check_sizes(x.size(), y.size(), "axpy");
#if defined(NUMAOPT_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        avx2::axpy(alpha, x.data(), y.data(), y.size());
        return;
    }
#endif
    scalar::axpy(alpha, x.data(), y.data(), y.size());
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size(), "sum_abs_diff");
#if defined(NUMAOPT_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        return avx2::sum_abs_diff(a.data(), b.data(), a.size());
    }
#endif
    return scalar::sum_abs_diff(a.data(), b.data(), a.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size(), "sum_sq_diff");
#if defined(NUMAOPT_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        return avx2::sum_sq_diff(a.data(), b.data(), a.size());
    }
#endif
    return scalar::sum_sq_diff(a.data(), b.data(), a.size());
}

} // namespace numaopt::kernels
