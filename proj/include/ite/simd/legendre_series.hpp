#pragma once

// Batched Legendre series  out[i] = sum_{p=0}^{P} c_p P_p(t[i])  with complex
// coefficients and real arguments in [-1, 1]. This is the inner loop of the
// far-field operator assembly (u_inf depends only on x.d).
//
// Two implementations share one recurrence,
//   P_{p+1} = a_p t P_p - b_p P_{p-1},  a_p = (2p+1)/(p+1),  b_p = p/(p+1):
// a scalar reference and an AVX2/FMA variant (4 arguments per lane group).
// The variant is chosen at runtime from CPUID; ITE_SIMD=scalar forces the
// reference path.

#include <complex>
#include <optional>
#include <span>
#include <string_view>

namespace ite::simd {

enum class Isa { Scalar, Avx2 };

/// Best instruction set supported by this CPU and build.
Isa detected_isa();
/// detected_isa() unless overridden by set_isa_override or ITE_SIMD=scalar.
Isa active_isa();
void set_isa_override(std::optional<Isa> isa);
std::string_view isa_name(Isa isa);

void legendre_series(std::span<const std::complex<double>> coeffs, std::span<const double> t,
                     std::span<std::complex<double>> out);
void legendre_series(Isa isa, std::span<const std::complex<double>> coeffs, std::span<const double> t,
                     std::span<std::complex<double>> out);

namespace detail {

// Raw kernels. `rec_a`/`rec_b` hold the recurrence constants for p = 0..n_coeffs-2.
void legendre_series_scalar(const std::complex<double>* coeffs, const double* rec_a, const double* rec_b,
                            int n_coeffs, const double* t, std::size_t n, std::complex<double>* out);
void legendre_series_avx2(const std::complex<double>* coeffs, const double* rec_a, const double* rec_b,
                          int n_coeffs, const double* t, std::size_t n, std::complex<double>* out);
bool avx2_compiled();

}  // namespace detail
}  // namespace ite::simd
