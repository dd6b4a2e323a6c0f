#include "ite/bie_sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace ite {
namespace {

constexpr cplx kI{0.0, 1.0};

ModalLayerCoeffs coeffs_from(cplx k, double radius, cplx j, cplx dj, cplx h, cplx dh) {
    const double r2 = radius * radius;
    ModalLayerCoeffs c;
    c.single_layer = kI * k * r2 * j * h;
    c.double_layer = 0.5 * kI * k * k * r2 * (j * dh + dj * h);
    c.adjoint_double_layer = c.double_layer;
    c.hypersingular = kI * k * k * k * r2 * dj * dh;
    return c;
}

}  // namespace

std::vector<ModalLayerCoeffs> layer_modal_coeffs_series(cplx k, int p_max, double radius) {
    if (k == cplx{0.0, 0.0}) throw std::invalid_argument("layer coefficients undefined at k = 0");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    const cplx z = k * radius;
    const OrderSeries j = sph_bessel_j_series(p_max, z);
    const OrderSeries h = sph_hankel1_series(p_max, z);
    std::vector<ModalLayerCoeffs> out(static_cast<std::size_t>(p_max) + 1);
    for (int p = 0; p <= p_max; ++p) {
        out[static_cast<std::size_t>(p)] =
            coeffs_from(k, radius, j.value[p], j.deriv[p], h.value[p], h.deriv[p]);
    }
    return out;
}

ModalLayerCoeffs layer_modal_coeffs(cplx k, int p, double radius) {
    return layer_modal_coeffs_series(k, p, radius)[static_cast<std::size_t>(p)];
}

ZBlock assemble_z_block(cplx k, int p, const ConductiveSphere& medium) {
    const ModalLayerCoeffs in = layer_modal_coeffs(k * medium.sqrt_index(), p, medium.radius);
    const ModalLayerCoeffs out = layer_modal_coeffs(k, p, medium.radius);
    const double eta = medium.eta;
    ZBlock z;
    z(0, 0) = in.single_layer - out.single_layer;
    z(0, 1) = -in.double_layer + out.double_layer + eta * in.single_layer;
    z(1, 0) = in.adjoint_double_layer - out.adjoint_double_layer;
    z(1, 1) = -in.hypersingular + out.hypersingular + eta * (in.adjoint_double_layer - 0.5);
    return z;
}

cplx det_z(cplx k, int p, const ConductiveSphere& medium) {
    const ZBlock z = assemble_z_block(k, p, medium);
    return z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0);
}

namespace {

void require_origin_outside(const EllipticContour& contour) {
    if (contour.elliptic_radius(cplx{0.0, 0.0}) <= 1.0) {
        throw std::invalid_argument("contour must exclude k = 0");
    }
}

}  // namespace

std::vector<BlockEigenvalue> z_block_nep(const ConductiveSphere& medium, std::span<const int> orders,
                                         const EllipticContour& contour, const BeynConfig& config) {
    require_origin_outside(contour);
    std::vector<BlockFunction> blocks;
    for (const int p : orders) {
        blocks.emplace_back([p, medium](cplx k) { return assemble_z_block(k, p, medium); });
    }
    auto found = solve_block_diagonal(blocks, contour, config);
    for (auto& e : found) e.block = orders[static_cast<std::size_t>(e.block)];
    return found;
}

std::vector<BlockEigenvalue> modal_block_nep(const ConductiveSphere& medium, std::span<const int> orders,
                                             const EllipticContour& contour,
                                             const BeynConfig& config) {
    require_origin_outside(contour);
    // Columns scaled by (kR)^{-p} and (k sqrt(n) R)^{-p}: holomorphic and
    // nonvanishing away from 0, so det keeps its zeros while the j_p ~ z^p
    // grading across the contour is removed.
    std::vector<BlockFunction> blocks;
    for (const int p : orders) {
        blocks.emplace_back([p, medium](cplx k) {
            ModalMatrix m = modal_matrix(k, p, medium);
            m.col(0) *= std::pow(k * medium.radius, -p);
            m.col(1) *= std::pow(k * medium.sqrt_index() * medium.radius, -p);
            return m;
        });
    }
    auto found = solve_block_diagonal(blocks, contour, config);
    for (auto& e : found) e.block = orders[static_cast<std::size_t>(e.block)];
    return found;
}

}  // namespace ite
