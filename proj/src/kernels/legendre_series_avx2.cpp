#include "ite/simd/legendre_series.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define ITE_HAVE_AVX2 1
#else
#define ITE_HAVE_AVX2 0
#endif

namespace ite::simd::detail {

bool avx2_compiled() { return ITE_HAVE_AVX2 != 0; }

#if ITE_HAVE_AVX2

void legendre_series_avx2(const std::complex<double>* coeffs, const double* rec_a, const double* rec_b,
                          int n_coeffs, const double* t, std::size_t n, std::complex<double>* out) {
    const std::size_t full = n - n % 4;
    double* dst = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < full; i += 4) {
        const __m256d x = _mm256_loadu_pd(t + i);
        __m256d prev = _mm256_set1_pd(1.0);
        __m256d cur = x;
        __m256d re = _mm256_set1_pd(coeffs[0].real());
        __m256d im = _mm256_set1_pd(coeffs[0].imag());
        if (n_coeffs > 1) {
            re = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[1].real()), cur, re);
            im = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[1].imag()), cur, im);
        }
        for (int p = 1; p + 1 < n_coeffs; ++p) {
            const __m256d ax = _mm256_mul_pd(_mm256_set1_pd(rec_a[p]), x);
            const __m256d next = _mm256_fnmadd_pd(_mm256_set1_pd(rec_b[p]), prev, _mm256_mul_pd(ax, cur));
            prev = cur;
            cur = next;
            re = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[p + 1].real()), cur, re);
            im = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[p + 1].imag()), cur, im);
        }
        // (r0 r1 r2 r3), (i0 i1 i2 i3) -> r0 i0 r1 i1 | r2 i2 r3 i3
        const __m256d lo = _mm256_unpacklo_pd(re, im);  // r0 i0 r2 i2
        const __m256d hi = _mm256_unpackhi_pd(re, im);  // r1 i1 r3 i3
        _mm256_storeu_pd(dst + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
        _mm256_storeu_pd(dst + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    }
    if (full < n) {
        legendre_series_scalar(coeffs, rec_a, rec_b, n_coeffs, t + full, n - full, out + full);
    }
}

#else

void legendre_series_avx2(const std::complex<double>* coeffs, const double* rec_a, const double* rec_b,
                          int n_coeffs, const double* t, std::size_t n, std::complex<double>* out) {
    legendre_series_scalar(coeffs, rec_a, rec_b, n_coeffs, t, n, out);
}

#endif

}  // namespace ite::simd::detail
