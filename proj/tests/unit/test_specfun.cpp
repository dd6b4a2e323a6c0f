#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ite/errors.hpp"
#include "ite/specfun.hpp"

using ite::cplx;

namespace {

// j_p(x) = x^p sum_m (-x^2/2)^m / (m! (2p+2m+1)!!), summed until the
// alternating tail bound (next term) is below 1e-22 of the sum.
long double j_power_series(int p, long double x) {
    long double dfact = 1.0L;
    for (int q = 1; q <= 2 * p + 1; q += 2) dfact *= q;
    long double term = std::pow(x, p) / dfact;
    long double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -(x * x / 2.0L) / (m * (2.0L * p + 2.0L * m + 1.0L));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum)) break;
    }
    return sum;
}

template <class F>
cplx richardson_derivative(F f, double x, double h) {
    auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

}  // namespace

TEST_CASE("j_0 closed forms") {
    CHECK(std::abs(ite::sph_bessel_j(0, std::numbers::pi)) <= 1e-14);
    CHECK(ite::sph_bessel_j(0, 0.0) == cplx{1.0, 0.0});
    for (int p = 1; p <= 10; ++p) CHECK(ite::sph_bessel_j(p, 0.0) == cplx{0.0, 0.0});
}

TEST_CASE("j_5(2) against the ascending power series") {
    const long double ref = j_power_series(5, 2.0L);
    const cplx got = ite::sph_bessel_j(5, 2.0);
    CHECK(std::abs(got.real() - static_cast<double>(ref)) <= 1e-14 * std::abs(static_cast<double>(ref)));
    CHECK(got.imag() == 0.0);
}

TEST_CASE("j_p and y_p against Boost on |z| <= 50, p <= 60") {
    for (int p = 0; p <= 60; p += 3) {
        for (double x : {0.3, 1.0, 2.5, 7.0, 13.3, 24.0, 37.5, 50.0}) {
            const double jr = boost::math::sph_bessel(static_cast<unsigned>(p), x);
            const double scale = x > p ? std::max(std::abs(jr), 1.0 / x) : std::abs(jr);
            CHECK(std::abs(ite::sph_bessel_j(p, x).real() - jr) <= 1e-12 * scale);
            if (p <= 40) {
                const double yr = boost::math::sph_neumann(static_cast<unsigned>(p), x);
                const double yscale = x > p ? std::max(std::abs(yr), 1.0 / x) : std::abs(yr);
                CHECK(std::abs(ite::sph_bessel_y(p, x).real() - yr) <= 1e-12 * yscale);
            }
        }
    }
}

TEST_CASE("derivative identities") {
    CHECK(ite::sph_bessel_j_deriv(0, 0.0) == cplx{0.0, 0.0});
    CHECK(std::abs(ite::sph_bessel_j_deriv(0, std::numbers::pi) - cplx{-1.0 / std::numbers::pi, 0.0}) <= 1e-12);
    const cplx fd = richardson_derivative([](double x) { return ite::sph_bessel_j(3, x); }, 1.5, 1e-2);
    CHECK(std::abs(ite::sph_bessel_j_deriv(3, 1.5) - fd) <= 1e-10);
    const double boost_prime = boost::math::sph_bessel_prime(3u, 1.5);
    CHECK(std::abs(ite::sph_bessel_j_deriv(3, 1.5).real() - boost_prime) <= 1e-14);
}

TEST_CASE("Hankel function closed form and derivative") {
    const cplx h0 = ite::sph_hankel1(0, 1.0);
    CHECK(std::abs(h0 - cplx{std::sin(1.0), -std::cos(1.0)}) <= 1e-15);
    const cplx fd = richardson_derivative([](double x) { return ite::sph_hankel1(0, x); }, 2.3, 1e-2);
    CHECK(std::abs(ite::sph_hankel1_deriv(0, 2.3) - fd) <= 1e-10);
    CHECK_THROWS_AS(ite::sph_hankel1(0, 0.0), ite::PoleError);
    CHECK_THROWS_AS(ite::sph_bessel_y(2, 0.0), ite::PoleError);
}

TEST_CASE("Wronskian j y' - j' y = 1/x^2") {
    for (double x : {0.5, 1.0, 5.0, 20.0}) {
        for (int p = 0; p <= 10; ++p) {
            const cplx w = ite::sph_bessel_j(p, x) * ite::sph_bessel_y_deriv(p, x) -
                           ite::sph_bessel_j_deriv(p, x) * ite::sph_bessel_y(p, x);
            CHECK(std::abs(w - 1.0 / (x * x)) <= 1e-12 / (x * x));
        }
    }
}

TEST_CASE("three-term recurrence residual on the annulus 0.1 <= |z| <= 40") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(0.1, 40.0), angle(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 60; ++trial) {
        const cplx z = std::polar(radius(rng), angle(rng));
        const auto j = ite::sph_bessel_j_series(41, z);
        const auto y = ite::sph_bessel_y_series(41, z);
        for (int p = 1; p <= 40; ++p) {
            for (const auto* f : {&j.value, &y.value}) {
                const cplx res = static_cast<double>(2 * p + 1) / z * (*f)[p] - (*f)[p - 1] - (*f)[p + 1];
                const double scale = std::max(std::abs((*f)[p - 1]), std::abs((*f)[p + 1]));
                CHECK(std::abs(res) <= 1e-11 * scale);
            }
        }
    }
}

TEST_CASE("real arguments give real values; conjugate symmetry") {
    for (int p = 0; p <= 20; ++p) {
        for (double x : {0.2, 3.0, 17.0}) {
            CHECK(std::abs(ite::sph_bessel_j(p, x).imag()) <= 1e-15);
            CHECK(std::abs(ite::sph_bessel_y(p, x).imag()) <= 1e-15);
        }
        const cplx z{2.3, 1.7};
        const cplx a = ite::sph_bessel_j(p, std::conj(z));
        const cplx b = std::conj(ite::sph_bessel_j(p, z));
        CHECK(std::abs(a - b) <= 1e-14 * std::abs(b));
    }
}

TEST_CASE("order and domain errors") {
    CHECK_THROWS_AS(ite::sph_bessel_j(ite::kMaxOrder + 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ite::sph_bessel_j(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ite::legendre_p(3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ite::sph_bessel_j(3, cplx{0.0, 800.0}), ite::EvaluationError);
}

TEST_CASE("Legendre polynomials") {
    for (int p = 0; p <= 40; ++p) CHECK(ite::legendre_p(p, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double t : {-0.7, 0.0, 0.4}) CHECK(ite::legendre_p(1, t) == t);
    const double t = 0.3;
    const double monomial = (231 * std::pow(t, 6) - 315 * std::pow(t, 4) + 105 * t * t - 5) / 16.0;
    CHECK(std::abs(ite::legendre_p(6, t) - monomial) <= 1e-15);
    for (int p = 0; p <= 60; ++p) {
        for (double s = -1.0; s <= 1.0; s += 0.01) CHECK(std::abs(ite::legendre_p(p, s)) <= 1.0 + 1e-14);
    }
}
