#include "ite/nep_beyn.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ite/errors.hpp"

namespace ite {

cplx EllipticContour::point(double t) const {
    return center + cplx{semi_axis_real * std::cos(t), semi_axis_imag * std::sin(t)};
}

double EllipticContour::elliptic_radius(cplx z) const {
    const cplx d = z - center;
    const double x = d.real() / semi_axis_real;
    const double y = d.imag() / semi_axis_imag;
    return std::sqrt(x * x + y * y);
}

double EllipticContour::boundary_distance(cplx z) const {
    return std::abs(elliptic_radius(z) - 1.0) * std::min(semi_axis_real, semi_axis_imag);
}

void EllipticContour::validate() const {
    if (!(semi_axis_real > 0.0) || !(semi_axis_imag > 0.0)) {
        throw std::invalid_argument("ellipse semi-axes must be positive");
    }
    if (node_count < 8 || node_count % 2 != 0) {
        throw std::invalid_argument("contour node count must be even and >= 8");
    }
}

std::vector<QuadratureNode> contour_nodes(const EllipticContour& contour) {
    contour.validate();
    const int n = contour.node_count;
    std::vector<QuadratureNode> nodes(static_cast<std::size_t>(n));
    constexpr cplx i{0.0, 1.0};
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * std::numbers::pi * j / n;
        const cplx dz{-contour.semi_axis_real * std::sin(t), contour.semi_axis_imag * std::cos(t)};
        nodes[static_cast<std::size_t>(j)] = {contour.point(t), dz / (i * static_cast<double>(n))};
    }
    return nodes;
}

double residual(const MatrixFunction& T, cplx lambda, const Eigen::VectorXcd& v) {
    return (T(lambda) * v).norm();
}

namespace {

Eigen::MatrixXcd random_probe(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd v(rows, cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            v(r, c) = cplx{s * re, s * im};
        }
    }
    return v;
}

}  // namespace

BeynResult beyn_solve(const MatrixFunction& T, int dimension, const EllipticContour& contour,
                      const BeynConfig& config) {
    if (dimension < 1) throw std::invalid_argument("matrix dimension must be positive");
    const int cols = config.probe_columns > 0 ? config.probe_columns : std::min(dimension, 12);
    if (cols > dimension) throw std::invalid_argument("probe columns exceed matrix dimension");

    const int moments = config.moments;
    if (moments < 1) throw std::invalid_argument("moment count must be >= 1");
    const Eigen::MatrixXcd probe = random_probe(dimension, cols, config.rng_seed);
    // a[q] = sum_j w_j z_j^q T(z_j)^{-1} probe, q = 0..2K-1
    std::vector<Eigen::MatrixXcd> a(static_cast<std::size_t>(2 * moments),
                                    Eigen::MatrixXcd::Zero(dimension, cols));
    double integrand_scale = 0.0;

    // Accumulate in node order so the result is reproducible bit for bit.
    for (const QuadratureNode& node : contour_nodes(contour)) {
        const Eigen::MatrixXcd tz = T(node.z);
        if (tz.rows() != dimension || tz.cols() != dimension) {
            throw std::invalid_argument("matrix function returned the wrong shape");
        }
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(tz);
        // rcond() reports 1 for an exactly zero pivot, so the pivot ratio is checked too.
        const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
        if (!(lu.rcond() > 1e-14) || !(pivots.minCoeff() > 1e-14 * pivots.maxCoeff())) {
            std::ostringstream msg;
            msg << "T(z) numerically singular at contour node z = " << node.z
                << "; the contour passes through (or next to) an eigenvalue";
            throw NepError(msg.str());
        }
        const Eigen::MatrixXcd x = lu.solve(probe);
        integrand_scale = std::max(integrand_scale, x.norm() / std::sqrt(static_cast<double>(cols)));
        cplx weight = node.w;
        for (auto& aq : a) {
            aq += weight * x;
            weight *= node.z;
        }
    }

    // Block Hankel matrices; moments = 1 gives B0 = A0, B1 = A1.
    const int rows_h = moments * dimension;
    const int cols_h = moments * cols;
    Eigen::MatrixXcd b0(rows_h, cols_h), b1(rows_h, cols_h);
    for (int r = 0; r < moments; ++r) {
        for (int c = 0; c < moments; ++c) {
            b0.block(r * dimension, c * cols, dimension, cols) = a[static_cast<std::size_t>(r + c)];
            b1.block(r * dimension, c * cols, dimension, cols) = a[static_cast<std::size_t>(r + c + 1)];
        }
    }

    BeynResult result;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    result.singular_values = svd.singularValues();
    const double top = result.singular_values.size() > 0 ? result.singular_values(0) : 0.0;
    const double cutoff = config.rank_tol * std::max(top, integrand_scale);
    int rank = 0;
    while (rank < result.singular_values.size() && result.singular_values(rank) > cutoff) ++rank;
    result.rank = rank;
    if (rank == 0) return result;
    // Full rank is ambiguous only while the probe can still grow; at l = m the
    // residual test below rejects spurious values.
    if (rank == cols_h && cols < dimension) {
        throw NepError("moment matrix is numerically full rank with " + std::to_string(cols) +
                       " probe columns: probe too small, increase probe columns or moments");
    }

    const Eigen::MatrixXcd v0 = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXcd w0 = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd s_inv = result.singular_values.head(rank).cwiseInverse();
    const Eigen::MatrixXcd b = v0.adjoint() * b1 * w0 * s_inv.asDiagonal();
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(b);

    for (int i = 0; i < rank; ++i) {
        const cplx lambda = eig.eigenvalues()(i);
        if (!contour.contains(lambda)) continue;
        NepEigenpair pair;
        pair.lambda = lambda;
        pair.vector = (v0.topRows(dimension) * eig.eigenvectors().col(i)).normalized();
        pair.residual = residual(T, lambda, pair.vector);
        pair.near_boundary = contour.boundary_distance(lambda) <= config.boundary_tol;
        (pair.residual <= config.residual_tol ? result.eigenpairs : result.rejected).push_back(std::move(pair));
    }
    auto by_real = [](const NepEigenpair& a, const NepEigenpair& b) {
        return a.lambda.real() < b.lambda.real() ||
               (a.lambda.real() == b.lambda.real() && a.lambda.imag() < b.lambda.imag());
    };
    std::sort(result.eigenpairs.begin(), result.eigenpairs.end(), by_real);
    std::sort(result.rejected.begin(), result.rejected.end(), by_real);
    return result;
}

namespace {

cplx block_det(const BlockFunction& block, cplx z) {
    const Eigen::Matrix2cd m = block(z);
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// f, f', f'' of det B(z) from a Cauchy-integral trapezoid on a small circle.
struct Jet {
    cplx f, d1, d2;
};

Jet det_jet(const BlockFunction& block, cplx z, double radius) {
    constexpr int kPoints = 16;
    Jet jet{block_det(block, z), 0.0, 0.0};
    for (int j = 0; j < kPoints; ++j) {
        const double t = 2.0 * std::numbers::pi * j / kPoints;
        const cplx e = std::polar(1.0, t);
        const cplx f = block_det(block, z + radius * e);
        jet.d1 += f / e;
        jet.d2 += f / (e * e);
    }
    jet.d1 /= kPoints * radius;
    jet.d2 *= 2.0 / (kPoints * radius * radius);
    return jet;
}

// Newton on det/det', which has simple zeros at roots of any multiplicity.
std::optional<cplx> polish_root(const BlockFunction& block, cplx z0) {
    cplx z = z0;
    for (int it = 0; it < 40; ++it) {
        const double radius = 1e-2 * std::max(1.0, std::abs(z));
        const Jet jet = det_jet(block, z, radius);
        if (jet.f == cplx{0.0, 0.0}) return z;
        const cplx denom = jet.d1 * jet.d1 - jet.f * jet.d2;
        if (denom == cplx{0.0, 0.0}) return std::nullopt;
        const cplx step = jet.f * jet.d1 / denom;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) return z;
    }
    return z;
}

double block_residual(const BlockFunction& block, cplx z) {
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(block(z));
    return svd.singularValues()(1);
}

int owning_block(const Eigen::VectorXcd& v, int blocks) {
    int best = 0;
    double best_norm = -1.0;
    for (int b = 0; b < blocks; ++b) {
        const double n = v.segment(2 * b, 2).norm();
        if (n > best_norm) {
            best_norm = n;
            best = b;
        }
    }
    return best;
}

}  // namespace

std::vector<BlockEigenvalue> solve_block_diagonal(std::span<const BlockFunction> blocks,
                                                  const EllipticContour& contour,
                                                  const BeynConfig& config) {
    const int q = static_cast<int>(blocks.size());
    if (q == 0) return {};
    const int m = 2 * q;
    // Constant per-block scaling (unit norm at the center) keeps the LU and the
    // residual test meaningful when block magnitudes differ by many decades.
    std::vector<BlockFunction> scaled;
    scaled.reserve(blocks.size());
    for (const BlockFunction& block : blocks) {
        const double norm = block(contour.center).norm();
        const double scale = (norm > 0.0 && std::isfinite(norm)) ? 1.0 / norm : 1.0;
        scaled.emplace_back([&block, scale](cplx z) -> Eigen::Matrix2cd { return scale * block(z); });
    }
    const MatrixFunction T = [&](cplx z) {
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(m, m);
        for (int b = 0; b < q; ++b) t.block<2, 2>(2 * b, 2 * b) = scaled[static_cast<std::size_t>(b)](z);
        return t;
    };
    const BeynResult res = beyn_solve(T, m, contour, config);

    // Every candidate is refined on the determinant of its owning block; a
    // defective eigenvalue arrives as a cluster that collapses onto one root.
    std::vector<BlockEigenvalue> found;
    auto refine = [&](const NepEigenpair& pair, bool accepted) {
        const int b = owning_block(pair.vector, q);
        const BlockFunction& block = scaled[static_cast<std::size_t>(b)];
        const std::optional<cplx> z = polish_root(block, pair.lambda);
        if (!z || !contour.contains(*z) || std::abs(*z - pair.lambda) > 1e-3 * std::max(1.0, std::abs(pair.lambda))) {
            if (accepted) found.push_back({pair.lambda, b, 1, pair.residual, false, pair.near_boundary});
            return;
        }
        const double r = block_residual(block, *z);
        if (r > config.residual_tol) {
            if (accepted) found.push_back({pair.lambda, b, 1, pair.residual, false, pair.near_boundary});
            return;
        }
        found.push_back({*z, b, 1, r, true, contour.boundary_distance(*z) <= config.boundary_tol});
    };
    for (const NepEigenpair& pair : res.eigenpairs) refine(pair, true);
    for (const NepEigenpair& pair : res.rejected) refine(pair, false);

    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.block < b.block || (a.block == b.block && a.lambda.real() < b.lambda.real());
    });
    std::vector<BlockEigenvalue> merged;
    for (const BlockEigenvalue& e : found) {
        if (!merged.empty() && merged.back().block == e.block &&
            std::abs(merged.back().lambda - e.lambda) <= 1e-6 * std::max(1.0, std::abs(e.lambda))) {
            BlockEigenvalue& keep = merged.back();
            keep.multiplicity += e.multiplicity;
            if (e.polished && !keep.polished) {
                const int mult = keep.multiplicity;
                keep = e;
                keep.multiplicity = mult;
            }
            continue;
        }
        merged.push_back(e);
    }
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
        return a.lambda.real() < b.lambda.real();
    });
    return merged;
}

}  // namespace ite
