#include "ite/simd/legendre_series.hpp"

namespace ite::simd::detail {

void legendre_series_scalar(const std::complex<double>* coeffs, const double* rec_a, const double* rec_b,
                            int n_coeffs, const double* t, std::size_t n, std::complex<double>* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = t[i];
        double prev = 1.0;
        double cur = x;
        double re = coeffs[0].real();
        double im = coeffs[0].imag();
        if (n_coeffs > 1) {
            re += coeffs[1].real() * cur;
            im += coeffs[1].imag() * cur;
        }
        for (int p = 1; p + 1 < n_coeffs; ++p) {
            const double next = rec_a[p] * x * cur - rec_b[p] * prev;
            prev = cur;
            cur = next;
            re += coeffs[p + 1].real() * cur;
            im += coeffs[p + 1].imag() * cur;
        }
        out[i] = {re, im};
    }
}

}  // namespace ite::simd::detail
