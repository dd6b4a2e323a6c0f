#pragma once

// Boundary-integral operator Z(k) for the conductive transmission problem,
// restricted to a sphere of radius R. On |x| = R the layer operators
//   S (single), D (double), K (adjoint double), T (hypersingular)
// are diagonal in spherical harmonics; with z = kR, j = j_p(z), h = h_p^(1)(z):
//
//   s = i k R^2 j h
//   d = kk = (i k^2 R^2 / 2) (j h' + j' h)   (direct values, jump terms averaged)
//   t = i k^3 R^2 j' h'
//
// and each mode p contributes the 2x2 block
//
//   [ s(k sqrt n) - s(k)      -d(k sqrt n) + d(k) + eta s(k sqrt n)         ]
//   [ kk(k sqrt n) - kk(k)    -t(k sqrt n) + t(k) + eta (kk(k sqrt n) - 1/2) ]
//
// acting on (normal derivative, trace) of the interior field.

#include <Eigen/Core>
#include <span>
#include <vector>

#include "ite/nep_beyn.hpp"
#include "ite/specfun.hpp"
#include "ite/sphere_modal.hpp"

namespace ite {

struct ModalLayerCoeffs {
    cplx single_layer;
    cplx double_layer;
    cplx adjoint_double_layer;
    cplx hypersingular;
};

using ZBlock = Eigen::Matrix2cd;

/// Throws std::invalid_argument for k = 0.
ModalLayerCoeffs layer_modal_coeffs(cplx k, int p, double radius);
std::vector<ModalLayerCoeffs> layer_modal_coeffs_series(cplx k, int p_max, double radius);

ZBlock assemble_z_block(cplx k, int p, const ConductiveSphere& medium);
cplx det_z(cplx k, int p, const ConductiveSphere& medium);

/// Beyn on k -> diag(Z_p(k)) for the listed orders.
std::vector<BlockEigenvalue> z_block_nep(const ConductiveSphere& medium, std::span<const int> orders,
                                         const EllipticContour& contour, const BeynConfig& config = {});

/// Same solver on diag(M_p(k)) (the modal determinant matrices).
std::vector<BlockEigenvalue> modal_block_nep(const ConductiveSphere& medium, std::span<const int> orders,
                                             const EllipticContour& contour,
                                             const BeynConfig& config = {});

}  // namespace ite
