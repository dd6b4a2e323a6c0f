#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "ite/errors.hpp"
#include "ite/nep_beyn.hpp"

using ite::cplx;

namespace {

Eigen::MatrixXcd diag_example(cplx z) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2, 2);
    t(0, 0) = z - 0.3;
    t(1, 1) = z - 0.7;
    return t;
}

ite::EllipticContour unit_circle(int nodes = 64) { return {{0.0, 0.0}, 1.0, 1.0, nodes}; }

template <class F>
cplx contour_sum(const ite::EllipticContour& c, F f) {
    cplx s{0.0, 0.0};
    for (const auto& node : ite::contour_nodes(c)) s += node.w * f(node.z);
    return s;
}

}  // namespace

TEST_CASE("contour nodes integrate Cauchy integrals") {
    CHECK(std::abs(contour_sum(unit_circle(16), [](cplx z) { return 1.0 / z; }) - 1.0) <= 1e-15);
    CHECK(std::abs(contour_sum({{0.3, -0.2}, 2.0, 0.7, 16}, [](cplx z) { return z; })) <= 1e-14);

    // 1/(z - 0.5) on the ellipse a = 1, b = 0.5: the pole sits at conformal
    // radius 1/sqrt(3), so the trapezoid error decays like 3^(-N/2).
    const ite::EllipticContour ell{{0.0, 0.0}, 1.0, 0.5, 32};
    auto f = [](cplx z) { return 1.0 / (z - 0.5); };
    const cplx s32 = contour_sum(ell, f);
    std::complex<long double> direct{0.0L, 0.0L};
    for (int j = 0; j < 32; ++j) {
        const long double t = 2.0L * std::numbers::pi_v<long double> * j / 32.0L;
        const std::complex<long double> z{std::cos(t), 0.5L * std::sin(t)};
        const std::complex<long double> dz{-std::sin(t), 0.5L * std::cos(t)};
        direct += dz / (std::complex<long double>{0.0L, 32.0L} * (z - 0.5L));
    }
    CHECK(std::abs(s32 - cplx(direct)) <= 1e-14);
    CHECK(std::abs(s32 - 1.0) <= 4.0 * std::pow(3.0, -16.0));
    CHECK(std::abs(contour_sum({{0.0, 0.0}, 1.0, 0.5, 64}, f) - 1.0) <= 1e-10);
}

TEST_CASE("contour validation") {
    CHECK_THROWS_AS(ite::contour_nodes({{0.0, 0.0}, 1.0, 1.0, 7}), std::invalid_argument);
    CHECK_THROWS_AS(ite::contour_nodes({{0.0, 0.0}, 1.0, 1.0, 6}), std::invalid_argument);
    CHECK_THROWS_AS(ite::contour_nodes({{0.0, 0.0}, -1.0, 1.0, 16}), std::invalid_argument);
}

TEST_CASE("linear diagonal example") {
    const auto res = ite::beyn_solve(diag_example, 2, unit_circle());
    REQUIRE(res.eigenpairs.size() == 2);
    CHECK(std::abs(res.eigenpairs[0].lambda - 0.3) <= 1e-12);
    CHECK(std::abs(res.eigenpairs[1].lambda - 0.7) <= 1e-12);
    for (const auto& e : res.eigenpairs) {
        CHECK(e.residual < 1e-12);
        CHECK(std::abs(e.vector.norm() - 1.0) <= 1e-14);
        CHECK(!e.near_boundary);
    }
}

TEST_CASE("scalar quadratic, one root enclosed") {
    auto t = [](cplx z) {
        Eigen::MatrixXcd m(1, 1);
        m(0, 0) = z * z - 1.0;
        return m;
    };
    const auto res = ite::beyn_solve(t, 1, {{1.0, 0.0}, 0.5, 0.5, 64});
    REQUIRE(res.eigenpairs.size() == 1);
    CHECK(std::abs(res.eigenpairs[0].lambda - 1.0) <= 1e-12);
}

TEST_CASE("residual") {
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = 1.0;
    CHECK(ite::residual(diag_example, 0.3, e1) <= 1e-14);
    CHECK(ite::residual(diag_example, 0.3 + 1e-3, e1) == doctest::Approx(1e-3).epsilon(1e-9));
    const Eigen::VectorXcd u = Eigen::VectorXcd::Constant(2, 1.0 / std::sqrt(2.0));
    CHECK(ite::residual(diag_example, cplx{2.0, 1.0}, u) > 0.5);
}

TEST_CASE("determinism, node doubling and seed independence") {
    ite::BeynConfig cfg;
    const auto a = ite::beyn_solve(diag_example, 2, unit_circle(64), cfg);
    const auto b = ite::beyn_solve(diag_example, 2, unit_circle(64), cfg);
    REQUIRE(a.eigenpairs.size() == b.eigenpairs.size());
    for (std::size_t i = 0; i < a.eigenpairs.size(); ++i) {
        CHECK(a.eigenpairs[i].lambda == b.eigenpairs[i].lambda);
        CHECK(a.eigenpairs[i].vector == b.eigenpairs[i].vector);
    }
    const auto c32 = ite::beyn_solve(diag_example, 2, unit_circle(32), cfg);
    REQUIRE(c32.eigenpairs.size() == a.eigenpairs.size());
    for (std::size_t i = 0; i < a.eigenpairs.size(); ++i) {
        CHECK(std::abs(c32.eigenpairs[i].lambda - a.eigenpairs[i].lambda) <= 1e-10);
    }
    cfg.rng_seed = 99;
    const auto other = ite::beyn_solve(diag_example, 2, unit_circle(64), cfg);
    REQUIRE(other.eigenpairs.size() == a.eigenpairs.size());
    for (std::size_t i = 0; i < a.eigenpairs.size(); ++i) {
        CHECK(std::abs(other.eigenpairs[i].lambda - a.eigenpairs[i].lambda) <= 1e-9);
    }
}

TEST_CASE("no eigenvalues inside gives an empty result") {
    const auto res = ite::beyn_solve(diag_example, 2, {{3.0, 0.0}, 0.5, 0.5, 32});
    CHECK(res.eigenpairs.empty());
    CHECK(res.rank == 0);
}

TEST_CASE("error signalling") {
    // contour through the eigenvalue 0.7
    CHECK_THROWS_AS(ite::beyn_solve(diag_example, 2, {{0.0, 0.0}, 0.7, 0.7, 16}), ite::NepError);
    // five roots, two probe columns, ten-dimensional problem
    auto many = [](cplx z) {
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(10, 10);
        for (int i = 0; i < 5; ++i) t(i, i) = z - 0.1 * (i + 1);
        return t;
    };
    ite::BeynConfig cfg;
    cfg.probe_columns = 2;
    CHECK_THROWS_AS(ite::beyn_solve(many, 10, unit_circle(), cfg), ite::NepError);
    cfg.probe_columns = 7;
    CHECK(ite::beyn_solve(many, 10, unit_circle(), cfg).eigenpairs.size() == 5);
}

TEST_CASE("higher moments resolve a block with more roots than its dimension") {
    // diag((z-0.2)(z-0.5), z-0.8): two roots share the first coordinate
    auto t = [](cplx z) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 0) = (z - 0.2) * (z - 0.5);
        m(1, 1) = z - 0.8;
        return m;
    };
    ite::BeynConfig cfg;
    cfg.moments = 2;
    const auto res = ite::beyn_solve(t, 2, unit_circle(), cfg);
    REQUIRE(res.eigenpairs.size() == 3);
    CHECK(std::abs(res.eigenpairs[0].lambda - 0.2) <= 1e-12);
    CHECK(std::abs(res.eigenpairs[1].lambda - 0.5) <= 1e-12);
    CHECK(std::abs(res.eigenpairs[2].lambda - 0.8) <= 1e-12);
}

TEST_CASE("block-diagonal solver merges a defective root") {
    // det = (z - 0.4)^2 (z + 0.3) in one 2x2 Jordan-type block, plus a simple block
    std::vector<ite::BlockFunction> blocks;
    blocks.emplace_back([](cplx z) {
        Eigen::Matrix2cd m;
        m << z - 0.4, 1.0, 0.0, (z - 0.4) * (z + 0.3);
        return m;
    });
    blocks.emplace_back([](cplx z) {
        Eigen::Matrix2cd m;
        m << z - 0.1, 0.0, 0.0, 2.0;
        return m;
    });
    ite::BeynConfig cfg;
    cfg.moments = 2;
    const auto found = ite::solve_block_diagonal(blocks, unit_circle(), cfg);
    REQUIRE(found.size() == 3);
    CHECK(std::abs(found[0].lambda + 0.3) <= 1e-10);
    CHECK(std::abs(found[1].lambda - 0.1) <= 1e-10);
    CHECK(found[1].block == 1);
    CHECK(std::abs(found[2].lambda - 0.4) <= 1e-7);
    CHECK(found[2].multiplicity == 2);
    CHECK(found[2].block == 0);
}
