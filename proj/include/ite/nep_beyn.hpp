#pragma once

// Contour-integral solver for holomorphic nonlinear eigenproblems T(z) x = 0
// (two-moment variant): with a random probe V (m x l),
//
//   A0 = (1/2 pi i) \oint T(z)^{-1} V dz,   A1 = (1/2 pi i) \oint z T(z)^{-1} V dz,
//
// A0 = V0 S0 W0^H (rank-truncated) and B = V0^H A1 W0 S0^{-1}; eigenvalues of
// B are the eigenvalues of T inside the contour, V0 s the eigenvectors.
// With K > 1 moments, A0/A1 are replaced by the K x K block Hankel matrices of
// A_q = (1/2 pi i) \oint z^q T(z)^{-1} V dz, q = 0..2K-1; this captures up to
// K l eigenvalues whose eigenvectors need not be linearly independent.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ite/specfun.hpp"

namespace ite {

using MatrixFunction = std::function<Eigen::MatrixXcd(cplx)>;
using BlockFunction = std::function<Eigen::Matrix2cd(cplx)>;

struct EllipticContour {
    cplx center{0.0, 0.0};
    double semi_axis_real = 1.0;
    double semi_axis_imag = 1.0;
    int node_count = 64;

    cplx point(double t) const;
    /// Normalized elliptic radius: < 1 inside, 1 on the contour.
    double elliptic_radius(cplx z) const;
    bool contains(cplx z) const { return elliptic_radius(z) < 1.0; }
    /// First-order distance estimate to the contour.
    double boundary_distance(cplx z) const;
    void validate() const;
};

struct QuadratureNode {
    cplx z;
    cplx w;  // sum_j w_j f(z_j) ~ (1/2 pi i) \oint f(z) dz
};

std::vector<QuadratureNode> contour_nodes(const EllipticContour& contour);

struct BeynConfig {
    int probe_columns = 0;  // 0 selects min(m, 12)
    double rank_tol = 1e-10;
    double residual_tol = 1e-8;
    double boundary_tol = 1e-8;
    std::uint64_t rng_seed = 20190301;
    int moments = 1;
};

struct NepEigenpair {
    cplx lambda;
    Eigen::VectorXcd vector;  // unit norm
    double residual = 0.0;    // ||T(lambda) v||
    bool near_boundary = false;
};

struct BeynResult {
    std::vector<NepEigenpair> eigenpairs;  // accepted, sorted by real part
    std::vector<NepEigenpair> rejected;    // inside the contour but residual too large
    int rank = 0;
    Eigen::VectorXd singular_values;
};

/// Throws NepError if the probe is too small (moment matrix numerically full
/// rank while fewer than m probe columns are used) or T(z_j) is singular at a
/// quadrature node.
BeynResult beyn_solve(const MatrixFunction& T, int dimension, const EllipticContour& contour,
                      const BeynConfig& config = {});

double residual(const MatrixFunction& T, cplx lambda, const Eigen::VectorXcd& v);

// --- block-diagonal problems ---------------------------------------------

struct BlockEigenvalue {
    cplx lambda;
    int block = 0;         // index into the block list
    int multiplicity = 1;  // candidates merged onto the same root
    double residual = 0.0;
    bool polished = false;  // recovered by Newton polishing on det of the block
    bool near_boundary = false;
};

/// Solves diag(B_0(z), ..., B_{q-1}(z)) x = 0 with beyn_solve. Every candidate,
/// including those failing the residual test (a defective eigenvalue arrives
/// split into a cluster), is polished by Newton steps on det B_b / (det B_b)'
/// of the owning block; polished roots of one block within 1e-6 are merged
/// and counted in `multiplicity`. Each block is scaled to unit norm at the
/// contour center; residuals refer to the scaled blocks.
std::vector<BlockEigenvalue> solve_block_diagonal(std::span<const BlockFunction> blocks,
                                                  const EllipticContour& contour,
                                                  const BeynConfig& config = {});

}  // namespace ite
