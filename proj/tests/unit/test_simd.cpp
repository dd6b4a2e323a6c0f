#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ite/simd/legendre_series.hpp"
#include "ite/specfun.hpp"

using ite::cplx;
namespace simd = ite::simd;

namespace {

struct Case {
    std::vector<cplx> coeffs;
    std::vector<double> t;
};

Case random_case(std::mt19937_64& rng, int n_coeffs, int n_points) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Case c;
    for (int p = 0; p < n_coeffs; ++p) c.coeffs.emplace_back(g(rng), g(rng));
    for (int i = 0; i < n_points; ++i) c.t.push_back(u(rng));
    if (n_points > 1) c.t[0] = 1.0, c.t[1] = -1.0;
    return c;
}

double coeff_mass(const std::vector<cplx>& c) {
    double s = 0.0;
    for (const cplx& v : c) s += std::abs(v);
    return s;
}

}  // namespace

TEST_CASE("scalar kernel matches the Legendre reference") {
    std::mt19937_64 rng(1);
    for (int n_coeffs : {1, 2, 3, 17, 40}) {
        const Case c = random_case(rng, n_coeffs, 13);
        std::vector<cplx> out(c.t.size());
        simd::legendre_series(simd::Isa::Scalar, c.coeffs, c.t, out);
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            const auto pl = ite::legendre_p_series(n_coeffs - 1, c.t[i]);
            cplx ref{0.0, 0.0};
            for (int p = 0; p < n_coeffs; ++p) ref += c.coeffs[static_cast<std::size_t>(p)] * pl[static_cast<std::size_t>(p)];
            CHECK(std::abs(out[i] - ref) <= 1e-14 * coeff_mass(c.coeffs));
        }
    }
}

TEST_CASE("AVX2 kernel agrees with the scalar kernel") {
    if (simd::detected_isa() != simd::Isa::Avx2) {
        MESSAGE("AVX2 not available; equivalence test skipped");
        return;
    }
    std::mt19937_64 rng(2);
    for (int n_coeffs : {1, 2, 5, 24, 60}) {
        for (int n_points : {0, 1, 3, 4, 5, 8, 31, 512}) {
            const Case c = random_case(rng, n_coeffs, n_points);
            std::vector<cplx> scalar(c.t.size()), vec(c.t.size());
            simd::legendre_series(simd::Isa::Scalar, c.coeffs, c.t, scalar);
            simd::legendre_series(simd::Isa::Avx2, c.coeffs, c.t, vec);
            for (std::size_t i = 0; i < c.t.size(); ++i) {
                CHECK(std::abs(scalar[i] - vec[i]) <= 1e-13 * coeff_mass(c.coeffs));
            }
        }
    }
}

TEST_CASE("dispatch override") {
    const simd::Isa detected = simd::detected_isa();
    simd::set_isa_override(simd::Isa::Scalar);
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    simd::set_isa_override(std::nullopt);
    if (detected == simd::Isa::Scalar) {
        CHECK_THROWS(simd::set_isa_override(simd::Isa::Avx2));
    }
    CHECK(simd::isa_name(simd::Isa::Avx2) == "avx2");
    std::vector<cplx> out(2);
    const std::vector<double> t{0.1, 0.2};
    CHECK_THROWS_AS(simd::legendre_series(std::vector<cplx>{1.0}, t, std::span<cplx>(out.data(), 1)),
                    std::invalid_argument);
    simd::legendre_series(std::vector<cplx>{}, t, out);
    CHECK(out[0] == cplx{0.0, 0.0});
}
