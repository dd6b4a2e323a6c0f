#pragma once

// Complex-argument spherical Bessel/Hankel functions and Legendre polynomials.
//
// j_p is evaluated by normalized downward (Miller) recurrence, y_p by upward
// recurrence, h_p^(1) = j_p + i y_p. Derivatives use
//   f_p'(z) = f_{p-1}(z) - (p+1)/z f_p(z),   f_0' = -f_1.
// All functions are pure and reentrant.

#include <complex>
#include <vector>

namespace ite {

using cplx = std::complex<double>;

/// Highest supported order.
inline constexpr int kMaxOrder = 80;

/// Values and first derivatives of one function family for orders 0..p_max.
struct OrderSeries {
    std::vector<cplx> value;
    std::vector<cplx> deriv;
};

// Orders 0..p_max in one pass (O(p_max + |z|) work).
OrderSeries sph_bessel_j_series(int p_max, cplx z);
OrderSeries sph_bessel_y_series(int p_max, cplx z);
OrderSeries sph_hankel1_series(int p_max, cplx z);

cplx sph_bessel_j(int p, cplx z);
cplx sph_bessel_j_deriv(int p, cplx z);
cplx sph_bessel_y(int p, cplx z);
cplx sph_bessel_y_deriv(int p, cplx z);
cplx sph_hankel1(int p, cplx z);
cplx sph_hankel1_deriv(int p, cplx z);

/// Second derivative from the spherical Bessel equation
/// f'' = -(2/z) f' - (1 - p(p+1)/z^2) f. Valid for z != 0.
cplx sph_second_deriv(int p, cplx z, cplx value, cplx deriv);

double legendre_p(int p, double t);
/// P_0(t)..P_{p_max}(t).
std::vector<double> legendre_p_series(int p_max, double t);

}  // namespace ite
