#include "ite/farfield_lsm.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "ite/errors.hpp"
#include "ite/simd/legendre_series.hpp"

namespace ite {
namespace {

constexpr cplx kI{0.0, 1.0};

// n = 1 is a legal (non-scattering) medium here.
void check_scatterer(const ConductiveSphere& m) {
    if (!(m.radius > 0.0) || !(m.index > 0.0) || !(m.eta >= 0.0)) {
        throw std::invalid_argument("far field needs R > 0, n > 0, eta >= 0");
    }
}

int minimum_terms(double k, const ConductiveSphere& m) {
    return static_cast<int>(std::ceil(k * m.radius * std::max(1.0, m.sqrt_index()))) + 12;
}


std::vector<cplx> ratio_series(double k, int p_top, const ConductiveSphere& m) {
    const double s = m.sqrt_index();
    const double R = m.radius;
    const OrderSeries outer_j = sph_bessel_j_series(p_top, cplx{k * R, 0.0});
    const OrderSeries outer_h = sph_hankel1_series(p_top, cplx{k * R, 0.0});
    const OrderSeries inner = sph_bessel_j_series(p_top, cplx{k * s * R, 0.0});
    std::vector<cplx> out(static_cast<std::size_t>(p_top) + 1);
    for (int p = 0; p <= p_top; ++p) {
        const cplx a = k * s * inner.deriv[p];
        const cplx b = inner.value[p];
        const cplx num = a * outer_j.value[p] - b * (k * outer_j.deriv[p] + m.eta * outer_j.value[p]);
        const cplx den_flux = k * outer_h.deriv[p] + m.eta * outer_h.value[p];
        const cplx den = a * outer_h.value[p] - b * den_flux;
        const double scale = std::abs(a * outer_h.value[p]) + std::abs(b * den_flux);
        if (!(std::abs(den) >= 1e-14 * scale) || scale == 0.0) {
            throw PoleError("scattering ratio denominator vanishes at k = " + std::to_string(k) +
                            ", p = " + std::to_string(p));
        }
        out[static_cast<std::size_t>(p)] = num / den;
    }
    return out;
}

std::optional<std::vector<cplx>> truncated_coefficients(double k, int p_top, int p_min,
                                                        const ConductiveSphere& m) {
    const std::vector<cplx> ratio = ratio_series(k, p_top, m);
    std::vector<cplx> c;
    double largest = 0.0;
    int small_run = 0;
    for (int p = 0; p <= p_top; ++p) {
        const cplx term = (kI / k) * static_cast<double>(2 * p + 1) * ratio[static_cast<std::size_t>(p)];
        c.push_back(term);
        largest = std::max(largest, std::abs(term));
        small_run = (std::abs(term) <= 1e-14 * largest) ? small_run + 1 : 0;
        if (p + 1 >= p_min && small_run >= 2) return c;
    }
    return std::nullopt;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int q = 1; q < n; ++q) {
                const double p2 = ((2.0 * q + 1.0) * t * p1 - q * p0) / (q + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double wt = 2.0 / ((1.0 - t * t) * dp * dp);
        x[static_cast<std::size_t>(i)] = -t;
        x[static_cast<std::size_t>(n - 1 - i)] = t;
        w[static_cast<std::size_t>(i)] = wt;
        w[static_cast<std::size_t>(n - 1 - i)] = wt;
    }
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

// Thin-SVD view of min ||A g - b||^2 + eps ||g||^2.
struct FilterSystem {
    Eigen::VectorXd sigma;
    Eigen::VectorXcd coeff;  // U^H b
    double outside = 0.0;    // ||b - U U^H b||^2
    Eigen::MatrixXcd v;

    double gnorm(double eps) const {
        double s = 0.0;
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            const double f = sigma(i) / (sigma(i) * sigma(i) + eps);
            s += f * f * std::norm(coeff(i));
        }
        return std::sqrt(s);
    }
    double rnorm(double eps) const {
        double s = outside;
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            const double f = eps / (sigma(i) * sigma(i) + eps);
            s += f * f * std::norm(coeff(i));
        }
        return std::sqrt(s);
    }
};

FilterSystem filter_system(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, bool need_v) {
    const unsigned opts = Eigen::ComputeThinU | (need_v ? static_cast<unsigned>(Eigen::ComputeThinV) : 0u);
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, opts);
    FilterSystem fs;
    fs.sigma = svd.singularValues();
    fs.coeff = svd.matrixU().adjoint() * b;
    fs.outside = std::max(0.0, b.squaredNorm() - fs.coeff.squaredNorm());
    if (need_v) fs.v = svd.matrixV();
    return fs;
}

MorozovResult morozov_on(const FilterSystem& fs, double delta) {
    auto discrepancy = [&](double log_eps) {
        const double eps = std::pow(10.0, log_eps);
        return fs.rnorm(eps) - delta * fs.gnorm(eps);
    };
    double lo = -16.0, hi = 4.0;
    if (discrepancy(lo) > 0.0) return {std::pow(10.0, lo), false};
    if (discrepancy(hi) < 0.0) return {std::pow(10.0, hi), false};
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (discrepancy(mid) > 0.0 ? hi : lo) = mid;
    }
    return {std::pow(10.0, 0.5 * (lo + hi)), true};
}

}  // namespace

FarFieldGrid FarFieldGrid::gauss_product(int polar, int azimuthal) {
    if (polar < 1 || azimuthal < 1) throw std::invalid_argument("direction grid sizes must be positive");
    std::vector<double> x, w;
    gauss_legendre(polar, x, w);
    FarFieldGrid g;
    const double dphi = 2.0 * std::numbers::pi / azimuthal;
    for (int i = 0; i < polar; ++i) {
        const double ct = x[static_cast<std::size_t>(i)];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < azimuthal; ++j) {
            const double phi = dphi * j;
            g.directions.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
            g.weights.push_back(w[static_cast<std::size_t>(i)] * dphi);
        }
    }
    return g;
}

cplx modal_scattering_ratio(double k, int p, const ConductiveSphere& medium) {
    check_scatterer(medium);
    if (!(k > 0.0)) throw std::invalid_argument("wave number must be positive");
    return ratio_series(k, p, medium)[static_cast<std::size_t>(p)];
}

std::vector<cplx> farfield_coefficients(double k, const ConductiveSphere& medium) {
    check_scatterer(medium);
    if (!(k > 0.0)) throw std::invalid_argument("wave number must be positive");
    const int p_min = minimum_terms(k, medium);
    if (p_min > kMaxOrder) throw EvaluationError("far-field series needs more than the maximum order");
    const int first_try = std::min(kMaxOrder, p_min + 24);
    if (auto c = truncated_coefficients(k, first_try, p_min, medium)) return *c;
    if (first_try < kMaxOrder) {
        if (auto c = truncated_coefficients(k, kMaxOrder, p_min, medium)) return *c;
    }
    throw EvaluationError("far-field series not converged by the maximum order at k = " + std::to_string(k));
}

cplx farfield_pattern(double k, double cos_angle, const ConductiveSphere& medium) {
    if (!(std::abs(cos_angle) <= 1.0)) throw std::invalid_argument("cos_angle outside [-1, 1]");
    const std::vector<cplx> c = farfield_coefficients(k, medium);
    cplx out;
    simd::legendre_series(c, std::span<const double>(&cos_angle, 1), std::span<cplx>(&out, 1));
    return out;
}

FarFieldOperator build_farfield_operator(double k, const FarFieldGrid& grid, const ConductiveSphere& medium,
                                         double noise_level, std::uint64_t seed) {
    const std::vector<cplx> c = farfield_coefficients(k, medium);
    const auto n = static_cast<Eigen::Index>(grid.size());
    FarFieldOperator op{Eigen::MatrixXcd(n, n), k, medium};
    std::vector<double> cosines(static_cast<std::size_t>(n));
    std::vector<cplx> row(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector3d& xi = grid.directions[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            cosines[static_cast<std::size_t>(j)] =
                std::clamp(xi.dot(grid.directions[static_cast<std::size_t>(j)]), -1.0, 1.0);
        }
        simd::legendre_series(c, cosines, row);
        for (Eigen::Index j = 0; j < n; ++j) {
            op.matrix(i, j) = grid.weights[static_cast<std::size_t>(j)] * row[static_cast<std::size_t>(j)];
        }
    }
    if (noise_level > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double s = noise_level / std::sqrt(2.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double re = normal(rng);
                const double im = normal(rng);
                op.matrix(i, j) *= cplx{1.0 + s * re, s * im};
            }
        }
    }
    return op;
}

Eigen::VectorXcd herglotz_rhs(double k, const Eigen::Vector3d& z, const FarFieldGrid& grid, PhaseSign sign) {
    const double sgn = sign == PhaseSign::Plus ? 1.0 : -1.0;
    Eigen::VectorXcd b(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        b(static_cast<Eigen::Index>(i)) = std::polar(1.0 / (4.0 * std::numbers::pi), sgn * k * grid.directions[i].dot(z));
    }
    return b;
}

Eigen::VectorXcd tikhonov_solve(const Eigen::MatrixXcd& F, const Eigen::VectorXcd& rhs, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("Tikhonov parameter must be positive");
    if (F.rows() != rhs.size()) throw std::invalid_argument("Tikhonov: rhs size mismatch");
    Eigen::MatrixXcd normal = F.adjoint() * F;
    normal.diagonal().array() += epsilon;
    return normal.ldlt().solve(F.adjoint() * rhs);
}

MorozovResult morozov_epsilon(const Eigen::MatrixXcd& F, const Eigen::VectorXcd& rhs, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("Morozov noise level must be positive");
    if (F.rows() != rhs.size()) throw std::invalid_argument("Morozov: rhs size mismatch");
    return morozov_on(filter_system(F, rhs, false), delta);
}

std::uint64_t scan_point_seed(std::uint64_t seed, std::size_t i) {
    // splitmix64 of (seed, i)
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(i) + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::vector<LsmPeak> detect_peaks(std::span<const double> k_grid, std::span<const double> values, double factor) {
    if (k_grid.size() != values.size()) throw std::invalid_argument("peak detection: size mismatch");
    std::vector<LsmPeak> peaks;
    const std::size_t n = values.size();
    if (n < 3) return peaks;
    const std::vector<double> v(values.begin(), values.end());
    const double med = median(v);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(v[i] - med);
    const double threshold = factor * median(dev);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
        double left_min = v[i];
        for (std::size_t j = i; j-- > 0;) {
            if (v[j] > v[i]) break;
            left_min = std::min(left_min, v[j]);
        }
        double right_min = v[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (v[j] > v[i]) break;
            right_min = std::min(right_min, v[j]);
        }
        const double prominence = v[i] - std::max(left_min, right_min);
        if (prominence > 0.0 && prominence >= threshold) peaks.push_back({i, k_grid[i], v[i], prominence});
    }
    return peaks;
}

LsmCurve lsm_scan(const ConductiveSphere& medium, std::span<const double> k_grid, const LsmOptions& options) {
    check_scatterer(medium);
    if (!(options.delta > 0.0)) throw std::invalid_argument("LSM noise level must be positive");
    for (std::size_t i = 1; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > k_grid[i - 1])) throw std::invalid_argument("LSM k grid must be strictly ascending");
    }
    const FarFieldGrid grid = FarFieldGrid::gauss_product(options.polar_nodes, options.azimuthal_nodes);
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd sqrt_w(n);
    for (Eigen::Index i = 0; i < n; ++i) sqrt_w(i) = std::sqrt(grid.weights[static_cast<std::size_t>(i)]);

    LsmCurve curve;
    curve.k_grid.assign(k_grid.begin(), k_grid.end());
    bool all_zero = true;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        const double k = k_grid[i];
        const FarFieldOperator op =
            build_farfield_operator(k, grid, medium, options.delta, scan_point_seed(options.seed, i));
        if (op.matrix.cwiseAbs().maxCoeff() == 0.0) {
            curve.gnorm.push_back(0.0);
            curve.epsilon.push_back(0.0);
            continue;
        }
        all_zero = false;
        // W^{1/2} F W^{-1/2}: Euclidean norms become L2(S) norms.
        const Eigen::MatrixXcd a = sqrt_w.asDiagonal() * op.matrix * sqrt_w.cwiseInverse().asDiagonal();
        const Eigen::VectorXcd b =
            sqrt_w.asDiagonal() * herglotz_rhs(k, options.sampling_point, grid, options.sign);
        const FilterSystem fs = filter_system(a, b, false);
        const MorozovResult mr = morozov_on(fs, options.delta);
        if (!mr.crossing_found) {
            curve.warnings.push_back("no discrepancy crossing at k = " + std::to_string(k) +
                                     "; bracket endpoint used");
        }
        curve.epsilon.push_back(mr.epsilon);
        curve.gnorm.push_back(fs.gnorm(mr.epsilon));
    }
    if (all_zero) {
        curve.degenerate = true;
        curve.warnings.push_back("far-field operator vanishes identically (no scatterer); no peaks");
        return curve;
    }
    curve.peaks = detect_peaks(curve.k_grid, curve.gnorm, options.prominence_factor);
    return curve;
}

}  // namespace ite
