#include <numaopt/kernels/kernels.hpp>
#include "avx2.hpp"

#include <immintrin.h>

#include <cmath>

// Compiled with -mavx2 only; callers reach it through the dispatcher after a
// CPU feature check. No FMA: multiply and add stay separate so the
// element-wise kernels round exactly like the scalar reference.

namespace numaopt::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

} // namespace

void split_gains(const double* prefix_sum, const double* prefix_count, double total_sum,
                 double total_count, double* out, std::size_t n) noexcept {
    const __m256d s = _mm256_set1_pd(total_sum);
    const __m256d c = _mm256_set1_pd(total_count);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d sl = _mm256_loadu_pd(prefix_sum + i);
        const __m256d nl = _mm256_loadu_pd(prefix_count + i);
        const __m256d sr = _mm256_sub_pd(s, sl);
        const __m256d nr = _mm256_sub_pd(c, nl);
        const __m256d left = _mm256_div_pd(_mm256_mul_pd(sl, sl), nl);
        const __m256d right = _mm256_div_pd(_mm256_mul_pd(sr, sr), nr);
        _mm256_storeu_pd(out + i, _mm256_add_pd(left, right));
    }
    if (i < n) {
        scalar::split_gains(prefix_sum + i, prefix_count + i, total_sum, total_count, out + i,
                            n - i);
    }
}

void subtract(const double* a, const double* b, double* out, std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    if (i < n) {
        scalar::subtract(a + i, b + i, out + i, n - i);
    }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d scaled = _mm256_mul_pd(a, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), scaled));
    }
    if (i < n) {
        scalar::axpy(alpha, x + i, y + i, n - i);
    }
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) noexcept {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += std::fabs(a[i] - b[i]);
    }
    return total;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

} // namespace numaopt::kernels::avx2
