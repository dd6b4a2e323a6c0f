#include "ite/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ite/errors.hpp"

namespace ite {
namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;

void check_order(int p) {
    if (p < 0 || p > kMaxOrder) {
        throw std::invalid_argument("spherical Bessel order " + std::to_string(p) +
                                    " outside [0, " + std::to_string(kMaxOrder) + "]");
    }
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Miller start order: far enough above max(p, |z|) that the minimal solution
// dominates by many digits at every requested order.
int miller_start(int p_top, double az) {
    const double base = std::max(static_cast<double>(p_top), std::ceil(az));
    return static_cast<int>(base + 20.0 + std::ceil(4.0 * std::cbrt(std::max(az, 1.0)))) + 10;
}

void fill_derivatives(OrderSeries& s, int p_max, cplx z, const cplx& order_one) {
    s.deriv.resize(p_max + 1);
    s.deriv[0] = -order_one;
    for (int p = 1; p <= p_max; ++p) {
        s.deriv[p] = s.value[p - 1] - static_cast<double>(p + 1) / z * s.value[p];
    }
}

}  // namespace

OrderSeries sph_bessel_j_series(int p_max, cplx z) {
    check_order(p_max);
    const int top = std::max(p_max, 1);
    OrderSeries out;
    out.value.assign(top + 1, cplx{0.0, 0.0});

    if (z == cplx{0.0, 0.0}) {
        out.value[0] = 1.0;
        out.deriv.assign(p_max + 1, cplx{0.0, 0.0});
        if (p_max >= 1) out.deriv[1] = 1.0 / 3.0;
        out.value.resize(p_max + 1);
        return out;
    }

    const cplx s = std::sin(z);
    const cplx c = std::cos(z);
    const cplx j0 = s / z;
    const cplx j1 = s / (z * z) - c / z;
    if (!finite(j0) || !finite(j1)) {
        throw EvaluationError("j_p overflow: |Im z| too large for z = (" + std::to_string(z.real()) +
                              ", " + std::to_string(z.imag()) + ")");
    }

    // Downward recurrence f_{p-1} = (2p+1)/z f_p - f_{p+1}.
    const int start = miller_start(top, std::abs(z));
    cplx f_next{0.0, 0.0};
    cplx f_cur{1e-300, 0.0};
    for (int p = start; p >= 1; --p) {
        if (p <= top) out.value[p] = f_cur;
        const cplx f_prev = static_cast<double>(2 * p + 1) / z * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        if (std::abs(f_cur) > kRescaleAbove) {
            f_cur *= kRescaleFactor;
            f_next *= kRescaleFactor;
            for (int q = p; q <= top; ++q) out.value[q] *= kRescaleFactor;
        }
    }
    out.value[0] = f_cur;

    // Normalize against whichever closed form is better conditioned here.
    const cplx scale = (std::abs(j0) >= std::abs(j1)) ? j0 / out.value[0] : j1 / out.value[1];
    for (auto& v : out.value) v *= scale;
    out.value[0] = j0;
    out.value[1] = j1;

    fill_derivatives(out, p_max, z, out.value[1]);
    out.value.resize(p_max + 1);
    return out;
}

OrderSeries sph_bessel_y_series(int p_max, cplx z) {
    check_order(p_max);
    if (z == cplx{0.0, 0.0}) throw PoleError("y_p is singular at z = 0");
    const int top = std::max(p_max, 1);
    OrderSeries out;
    out.value.resize(top + 1);
    const cplx s = std::sin(z);
    const cplx c = std::cos(z);
    out.value[0] = -c / z;
    out.value[1] = -c / (z * z) - s / z;
    for (int p = 1; p < top; ++p) {
        out.value[p + 1] = static_cast<double>(2 * p + 1) / z * out.value[p] - out.value[p - 1];
    }
    for (int p = 0; p <= top; ++p) {
        if (!finite(out.value[p])) {
            throw EvaluationError("y_p overflow at order " + std::to_string(p) + ", |z| = " +
                                  std::to_string(std::abs(z)));
        }
    }
    fill_derivatives(out, p_max, z, out.value[1]);
    out.value.resize(p_max + 1);
    return out;
}

OrderSeries sph_hankel1_series(int p_max, cplx z) {
    if (z == cplx{0.0, 0.0}) throw PoleError("h_p^(1) is singular at z = 0");
    OrderSeries j = sph_bessel_j_series(p_max, z);
    const OrderSeries y = sph_bessel_y_series(p_max, z);
    constexpr cplx i{0.0, 1.0};
    for (int p = 0; p <= p_max; ++p) {
        j.value[p] += i * y.value[p];
        j.deriv[p] += i * y.deriv[p];
    }
    return j;
}

cplx sph_bessel_j(int p, cplx z) { return sph_bessel_j_series(p, z).value[p]; }
cplx sph_bessel_j_deriv(int p, cplx z) { return sph_bessel_j_series(p, z).deriv[p]; }
cplx sph_bessel_y(int p, cplx z) { return sph_bessel_y_series(p, z).value[p]; }
cplx sph_bessel_y_deriv(int p, cplx z) { return sph_bessel_y_series(p, z).deriv[p]; }
cplx sph_hankel1(int p, cplx z) { return sph_hankel1_series(p, z).value[p]; }
cplx sph_hankel1_deriv(int p, cplx z) { return sph_hankel1_series(p, z).deriv[p]; }

cplx sph_second_deriv(int p, cplx z, cplx value, cplx deriv) {
    const double pp = static_cast<double>(p) * (p + 1);
    return -2.0 / z * deriv - (1.0 - pp / (z * z)) * value;
}

double legendre_p(int p, double t) { return legendre_p_series(p, t)[p]; }

std::vector<double> legendre_p_series(int p_max, double t) {
    if (p_max < 0) throw std::invalid_argument("Legendre order must be non-negative");
    if (!(std::abs(t) <= 1.0)) throw std::invalid_argument("Legendre argument outside [-1, 1]");
    std::vector<double> out(p_max + 1);
    out[0] = 1.0;
    if (p_max >= 1) out[1] = t;
    for (int p = 1; p < p_max; ++p) {
        out[p + 1] = ((2.0 * p + 1.0) * t * out[p] - p * out[p - 1]) / (p + 1.0);
    }
    return out;
}

}  // namespace ite
