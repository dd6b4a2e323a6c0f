#pragma once

// Interior transmission eigenvalues of a ball with a conductive boundary.
//
// For mode order p the trace and flux conditions on |x| = R give the 2x2 system
//
//   M_p(k) = [ -j_p(kR)                    j_p(k sqrt(n) R)            ]
//            [ -k j_p'(kR) - eta j_p(kR)   k sqrt(n) j_p'(k sqrt(n) R) ]
//
// and k > 0 is a transmission eigenvalue iff det M_p(k) = 0 for some p >= 0.

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ite/root_scan.hpp"
#include "ite/specfun.hpp"

namespace ite {

struct ConductiveSphere {
    double radius = 1.0;
    double index = 4.0;  // refractive index n
    double eta = 1.0;    // boundary conductivity

    double sqrt_index() const;
    /// Throws ConfigError unless R > 0, n > 0, n != 1, eta >= 0.
    void validate() const;
};

struct EigenvalueRecord {
    double k = 0.0;
    int p = 0;
    Multiplicity multiplicity_hint = Multiplicity::SimpleSignChange;
    double residual = 0.0;  // |det M_p(k)|
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

struct KInterval {
    double lo = 0.1;
    double hi = 5.0;
};

struct ScanOptions {
    double grid_step = 1e-3;
    double merge_tol = 1e-9;
    RootOptions roots{};
};

using ModalMatrix = Eigen::Matrix2cd;

ModalMatrix modal_matrix(cplx k, int p, const ConductiveSphere& medium);
cplx modal_det(cplx k, int p, const ConductiveSphere& medium);
/// d/dk det M_p(k), analytic (second derivatives from the Bessel equation).
cplx modal_det_dk(cplx k, int p, const ConductiveSphere& medium);

/// det M_p(k) for p = 0..p_max at one real k, sharing a single Bessel sweep.
std::vector<double> modal_det_orders(double k, int p_max, const ConductiveSphere& medium);

/// All real roots of det M_p, p <= p_max, in the interval, sorted ascending.
/// Duplicate k across orders (within merge_tol) are collapsed to the lowest p.
std::vector<EigenvalueRecord> scan_real_eigenvalues(const ConductiveSphere& medium,
                                                    KInterval interval, int p_max,
                                                    const ScanOptions& options = {});

/// Real roots of the single mode p in [lo, hi].
std::vector<EigenvalueRecord> mode_roots(const ConductiveSphere& medium, int p, KInterval interval,
                                         const ScanOptions& options = {});

// --- eta -> infinity limit -------------------------------------------------

enum class DirichletBall { Radius, ScaledRadius };  // zeros of j_p(kR) / j_p(k sqrt(n) R)

struct DirichletEigenvalue {
    double k = 0.0;
    int p = 0;
    DirichletBall ball = DirichletBall::Radius;
};

std::vector<DirichletEigenvalue> dirichlet_limit_eigenvalues(const ConductiveSphere& medium,
                                                             KInterval interval, int p_max,
                                                             const ScanOptions& options = {});

// --- continuation ---------------------------------------------------------

struct TrackOptions {
    double search_step = 2e-4;  // local grid used around the predicted root
    double min_window = 0.02;
    double max_window = 0.5;
    double ambiguity_tol = 1e-10;
};

/// Follows the root of det M_p that starts at k_start for path.front() along
/// the sequence of media. Each step keeps the root nearest the linear
/// prediction. Throws TrackingError when the root is lost or ambiguous.
std::vector<double> track_root(int p, double k_start, std::span<const ConductiveSphere> path,
                               const TrackOptions& options = {});

/// n-th eigenvalue (1-based, sorted with multiplicity across modes) of a medium.
EigenvalueRecord eigenvalue_by_index(const ConductiveSphere& medium, int index, double k_hi,
                                     int p_max, const ScanOptions& options = {});

/// Media interpolating from a to b (in eta or index) with at most max_step
/// change per step; geometric spacing when both endpoints are positive and
/// `geometric` is set.
std::vector<ConductiveSphere> continuation_path(const ConductiveSphere& a, const ConductiveSphere& b,
                                                double max_step, bool geometric);

// --- convergence as eta -> 0 ----------------------------------------------

struct EocRow {
    double eta = 0.0;
    int index = 0;
    double k = 0.0;
    double abs_error = 0.0;
    std::optional<double> eoc;  // absent for the first row or a zero error
};

/// eps_j = |k_ref - k_j|, EOC_j = log(eps_{j-1} / eps_j) / log 2.
std::vector<EocRow> eoc_from_sequence(std::span<const double> etas, std::span<const double> ks,
                                      double k_reference, int index);

struct EocOptions {
    double k_hi = 6.0;
    int p_max = 25;
    ScanOptions scan{};
    TrackOptions track{};
};

/// For each index, picks the eigenvalue at etas.front(), follows its curve
/// through the halving eta sequence and down to eta = 0 for the reference.
std::vector<EocRow> eoc_table(const ConductiveSphere& base, std::span<const double> etas,
                              std::span<const int> indices, const EocOptions& options = {});

// --- monotonicity ---------------------------------------------------------

struct FirstEigenvalue {
    double eta = 0.0;
    double k = 0.0;
    int p = 0;
};

/// Smallest transmission eigenvalue over all p, for each eta in the list.
std::vector<FirstEigenvalue> monotonicity_sweep(const ConductiveSphere& base,
                                                std::span<const double> etas, int p_max = 25,
                                                const ScanOptions& options = {});

FirstEigenvalue first_eigenvalue(const ConductiveSphere& medium, int p_max = 25,
                                 const ScanOptions& options = {});

struct Crossover {
    double eta_before = 0.0;
    double eta_after = 0.0;
    double k_first_before = 0.0, k_second_before = 0.0;
    double k_first_after = 0.0, k_second_after = 0.0;
};

/// Tracks eigenvalue curves `index_a` < `index_b` (as sorted at eta_from) and
/// reports the first path step where their order flips.
std::optional<Crossover> detect_crossover(const ConductiveSphere& base, int index_a, int index_b,
                                          double eta_from, double eta_to, double k_hi = 6.0,
                                          int p_max = 25);

}  // namespace ite
