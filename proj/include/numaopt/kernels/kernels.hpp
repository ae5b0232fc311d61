#pragma once

// Data-parallel inner loops of the tree learners and evaluators.
//
// Every kernel has a scalar reference implementation and, where the build
// and the CPU allow it, an AVX2 variant. The active backend is chosen once at
// first use (CPU feature probe, overridable with NUMAOPT_KERNELS=scalar) and
// can be forced from tests.
//
// Element-wise kernels (split_gains, subtract, axpy) produce bit-identical
// results on every backend. Reductions (sum_abs_diff, sum_sq_diff) reassociate
// the sum on SIMD backends and agree with the scalar reference only to within
// rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace numaopt::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b) noexcept;

/// Backend used by the dispatching entry points below.
Backend active_backend() noexcept;

/// True when `b` was compiled in and the running CPU supports it.
bool backend_available(Backend b) noexcept;

/// Forces a backend. Throws std::invalid_argument if it is unavailable.
void set_backend(Backend b);

// out[i] = prefix_sum[i]^2 / prefix_count[i]
//        + (total_sum - prefix_sum[i])^2 / (total_count - prefix_count[i])
//
// The caller guarantees 0 < prefix_count[i] < total_count.
void split_gains(std::span<const double> prefix_sum, std::span<const double> prefix_count,
                 double total_sum, double total_count, std::span<double> out);

// out[i] = a[i] - b[i]
void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out);

// y[i] = y[i] + alpha * x[i]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// sum |a[i] - b[i]|
double sum_abs_diff(std::span<const double> a, std::span<const double> b);

// sum (a[i] - b[i])^2
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

// Scalar reference, callable directly regardless of the active backend.
namespace scalar {
void split_gains(const double* prefix_sum, const double* prefix_count, double total_sum,
                 double total_count, double* out, std::size_t n) noexcept;
void subtract(const double* a, const double* b, double* out, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double sum_abs_diff(const double* a, const double* b, std::size_t n) noexcept;
double sum_sq_diff(const double* a, const double* b, std::size_t n) noexcept;
} // namespace scalar

} // namespace numaopt::kernels
