#pragma once

#include <cstddef>

namespace numaopt::kernels::avx2 {
void split_gains(const double* prefix_sum, const double* prefix_count, double total_sum,
                 double total_count, double* out, std::size_t n) noexcept;
void subtract(const double* a, const double* b, double* out, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double sum_abs_diff(const double* a, const double* b, std::size_t n) noexcept;
double sum_sq_diff(const double* a, const double* b, std::size_t n) noexcept;
} // namespace numaopt::kernels::avx2
