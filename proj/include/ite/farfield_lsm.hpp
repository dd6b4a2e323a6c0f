#pragma once

// Far field of the conductive ball and the linear sampling indicator.
//
// Mode p scatters with
//   ratio_p = N_p(j) / N_p(h),
//   N_p(f)  = k sqrt(n) j_p'(k sqrt(n) R) f_p(kR) - j_p(k sqrt(n) R) (k f_p'(kR) + eta f_p(kR)),
// and u_inf(x, d) = (i/k) sum_p (2p+1) ratio_p P_p(x . d).
// For real parameters |1 - 2 ratio_p| = 1.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ite/specfun.hpp"
#include "ite/sphere_modal.hpp"

namespace ite {

struct FarFieldGrid {
    std::vector<Eigen::Vector3d> directions;  // unit vectors
    std::vector<double> weights;              // sum to 4 pi

    /// Gauss-Legendre in cos(theta) times a uniform azimuthal rule.
    static FarFieldGrid gauss_product(int polar = 16, int azimuthal = 32);
    std::size_t size() const { return directions.size(); }
};

/// Throws PoleError when |denominator| < 1e-14 * (its term scale).
cplx modal_scattering_ratio(double k, int p, const ConductiveSphere& medium);

/// c_p = (i/k)(2p+1) ratio_p, truncated adaptively: at least
/// ceil(kR max(1, sqrt n)) + 12 terms, then until two consecutive |c_p| fall
/// below 1e-14 of the largest. Throws EvaluationError if kMaxOrder is reached.
std::vector<cplx> farfield_coefficients(double k, const ConductiveSphere& medium);

cplx farfield_pattern(double k, double cos_angle, const ConductiveSphere& medium);

struct FarFieldOperator {
    Eigen::MatrixXcd matrix;  // F(i, j) = w_j u_inf(x_i, d_j), times noise
    double k = 0.0;
    ConductiveSphere medium;
};

/// Entries are multiplied by 1 + delta (g1 + i g2)/sqrt(2) with g standard
/// normal, drawn row-major from a generator seeded with `seed`.
FarFieldOperator build_farfield_operator(double k, const FarFieldGrid& grid, const ConductiveSphere& medium,
                                         double noise_level = 0.0, std::uint64_t seed = 0);

enum class PhaseSign { Plus, Minus };  // exp(+i k x.z) or exp(-i k x.z)

Eigen::VectorXcd herglotz_rhs(double k, const Eigen::Vector3d& z, const FarFieldGrid& grid,
                              PhaseSign sign = PhaseSign::Plus);

/// g = (F^H F + eps I)^{-1} F^H rhs. Throws std::invalid_argument unless eps > 0.
Eigen::VectorXcd tikhonov_solve(const Eigen::MatrixXcd& F, const Eigen::VectorXcd& rhs, double epsilon);

struct MorozovResult {
    double epsilon = 0.0;
    bool crossing_found = true;  // false: bracket endpoint returned
};

/// eps with ||F g_eps - rhs|| = delta ||g_eps||, bisection on log10(eps) over [-16, 4].
MorozovResult morozov_epsilon(const Eigen::MatrixXcd& F, const Eigen::VectorXcd& rhs, double delta);

struct LsmPeak {
    std::size_t index = 0;
    double k = 0.0;
    double gnorm = 0.0;
    double prominence = 0.0;
};

struct LsmCurve {
    std::vector<double> k_grid;
    std::vector<double> gnorm;    // grid-weighted L2 norm of g_z
    std::vector<double> epsilon;  // Morozov parameter per k
    std::vector<LsmPeak> peaks;
    std::vector<std::string> warnings;
    bool degenerate = false;  // F vanished identically (no scatterer)
};

struct LsmOptions {
    int polar_nodes = 16;
    int azimuthal_nodes = 32;
    double delta = 0.005;
    std::uint64_t seed = 20190301;
    Eigen::Vector3d sampling_point = Eigen::Vector3d::Zero();
    PhaseSign sign = PhaseSign::Plus;
    double prominence_factor = 2.0;  // times the median absolute deviation
};

/// Seed for scan point i, independent of evaluation order.
std::uint64_t scan_point_seed(std::uint64_t seed, std::size_t i);

LsmCurve lsm_scan(const ConductiveSphere& medium, std::span<const double> k_grid, const LsmOptions& options = {});

/// Interior local maxima whose topographic prominence is >= factor * MAD(values).
std::vector<LsmPeak> detect_peaks(std::span<const double> k_grid, std::span<const double> values, double factor);

}  // namespace ite
