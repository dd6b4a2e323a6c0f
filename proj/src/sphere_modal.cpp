#include "ite/sphere_modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ite/errors.hpp"

namespace ite {

double ConductiveSphere::sqrt_index() const { return std::sqrt(index); }

void ConductiveSphere::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("radius R must be positive (got " + std::to_string(radius) + ")");
    }
    if (!(index > 0.0) || !std::isfinite(index)) {
        throw ConfigError("refractive index n must be positive (got " + std::to_string(index) + ")");
    }
    if (index == 1.0) {
        throw ConfigError("refractive index n = 1 is not admissible: require 0 < n < 1 or n > 1");
    }
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw ConfigError("boundary conductivity eta must be >= 0 (got " + std::to_string(eta) + ")");
    }
}

ModalMatrix modal_matrix(cplx k, int p, const ConductiveSphere& medium) {
    const double s = medium.sqrt_index();
    const double R = medium.radius;
    const OrderSeries outer = sph_bessel_j_series(p, k * R);
    const OrderSeries inner = sph_bessel_j_series(p, k * s * R);
    ModalMatrix m;
    m(0, 0) = -outer.value[p];
    m(0, 1) = inner.value[p];
    m(1, 0) = -k * outer.deriv[p] - medium.eta * outer.value[p];
    m(1, 1) = k * s * inner.deriv[p];
    return m;
}

cplx modal_det(cplx k, int p, const ConductiveSphere& medium) {
    const ModalMatrix m = modal_matrix(k, p, medium);
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

cplx modal_det_dk(cplx k, int p, const ConductiveSphere& medium) {
    const double s = medium.sqrt_index();
    const double R = medium.radius;
    const double eta = medium.eta;
    const cplx z1 = k * R;
    const cplx z2 = k * s * R;
    const OrderSeries outer = sph_bessel_j_series(p, z1);
    const OrderSeries inner = sph_bessel_j_series(p, z2);
    const cplx j1 = outer.value[p], dj1 = outer.deriv[p];
    const cplx j2 = inner.value[p], dj2 = inner.deriv[p];
    const cplx ddj1 = sph_second_deriv(p, z1, j1, dj1);
    const cplx ddj2 = sph_second_deriv(p, z2, j2, dj2);

    const cplx a11 = -j1, a12 = j2;
    const cplx a21 = -k * dj1 - eta * j1;
    const cplx a22 = k * s * dj2;
    const cplx da11 = -R * dj1;
    const cplx da12 = s * R * dj2;
    const cplx da21 = -dj1 - k * R * ddj1 - eta * R * dj1;
    const cplx da22 = s * dj2 + k * s * s * R * ddj2;
    return da11 * a22 + a11 * da22 - da12 * a21 - a12 * da21;
}

std::vector<double> modal_det_orders(double k, int p_max, const ConductiveSphere& medium) {
    const double s = medium.sqrt_index();
    const double R = medium.radius;
    const OrderSeries outer = sph_bessel_j_series(p_max, cplx{k * R, 0.0});
    const OrderSeries inner = sph_bessel_j_series(p_max, cplx{k * s * R, 0.0});
    std::vector<double> out(p_max + 1);
    for (int p = 0; p <= p_max; ++p) {
        const double a11 = -outer.value[p].real();
        const double a12 = inner.value[p].real();
        const double a21 = -k * outer.deriv[p].real() - medium.eta * outer.value[p].real();
        const double a22 = k * s * inner.deriv[p].real();
        out[p] = a11 * a22 - a12 * a21;
    }
    return out;
}

namespace {

std::vector<double> uniform_grid(KInterval interval, double step) {
    if (!(interval.lo > 0.0) || !(interval.hi > interval.lo)) {
        throw std::invalid_argument("k interval must satisfy 0 < k_lo < k_hi");
    }
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    const auto cells = static_cast<std::size_t>(std::ceil((interval.hi - interval.lo) / step - 1e-9));
    std::vector<double> grid(cells + 1);
    const double h = (interval.hi - interval.lo) / static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) grid[i] = interval.lo + h * static_cast<double>(i);
    grid.back() = interval.hi;
    return grid;
}

std::vector<EigenvalueRecord> roots_for_mode(const ConductiveSphere& medium, int p,
                                             std::span<const double> grid,
                                             std::span<const double> values,
                                             const ScanOptions& options) {
    auto f = [&](double k) { return modal_det(cplx{k, 0.0}, p, medium).real(); };
    auto df = [&](double k) { return modal_det_dk(cplx{k, 0.0}, p, medium).real(); };
    auto terms = [&](double k) {
        const ModalMatrix m = modal_matrix(cplx{k, 0.0}, p, medium);
        return std::abs(m(0, 0) * m(1, 1)) + std::abs(m(0, 1) * m(1, 0));
    };
    std::vector<EigenvalueRecord> out;
    for (const RootCandidate& c : find_real_roots(grid, values, f, df, options.roots, terms)) {
        out.push_back({c.x, p, c.hint, c.residual, c.lo, c.hi});
    }
    return out;
}

void sort_and_merge(std::vector<EigenvalueRecord>& records, double merge_tol) {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return a.k < b.k || (a.k == b.k && a.p < b.p);
    });
    std::vector<EigenvalueRecord> merged;
    for (const auto& r : records) {
        if (!merged.empty() && std::abs(r.k - merged.back().k) <= merge_tol) {
            if (r.p < merged.back().p) merged.back() = r;
            continue;
        }
        merged.push_back(r);
    }
    records = std::move(merged);
}

}  // namespace

std::vector<EigenvalueRecord> mode_roots(const ConductiveSphere& medium, int p, KInterval interval,
                                         const ScanOptions& options) {
    const std::vector<double> grid = uniform_grid(interval, options.grid_step);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = modal_det(cplx{grid[i], 0.0}, p, medium).real();
    }
    return roots_for_mode(medium, p, grid, values, options);
}

std::vector<EigenvalueRecord> scan_real_eigenvalues(const ConductiveSphere& medium,
                                                    KInterval interval, int p_max,
                                                    const ScanOptions& options) {
    medium.validate();
    if (p_max < 0 || p_max > kMaxOrder) throw std::invalid_argument("p_max out of range");
    const std::vector<double> grid = uniform_grid(interval, options.grid_step);

    // values[p][i] = det M_p(grid[i])
    std::vector<std::vector<double>> values(p_max + 1, std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::vector<double> dets = modal_det_orders(grid[i], p_max, medium);
        for (int p = 0; p <= p_max; ++p) values[p][i] = dets[p];
    }

    std::vector<EigenvalueRecord> records;
    for (int p = 0; p <= p_max; ++p) {
        auto found = roots_for_mode(medium, p, grid, values[p], options);
        records.insert(records.end(), found.begin(), found.end());
    }
    sort_and_merge(records, options.merge_tol);
    return records;
}

std::vector<DirichletEigenvalue> dirichlet_limit_eigenvalues(const ConductiveSphere& medium,
                                                             KInterval interval, int p_max,
                                                             const ScanOptions& options) {
    medium.validate();
    const std::vector<double> grid = uniform_grid(interval, options.grid_step);
    std::vector<DirichletEigenvalue> out;
    for (const DirichletBall ball : {DirichletBall::Radius, DirichletBall::ScaledRadius}) {
        const double radius =
            medium.radius * (ball == DirichletBall::Radius ? 1.0 : medium.sqrt_index());
        std::vector<std::vector<double>> values(p_max + 1, std::vector<double>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const OrderSeries s = sph_bessel_j_series(p_max, cplx{grid[i] * radius, 0.0});
            for (int p = 0; p <= p_max; ++p) values[p][i] = s.value[p].real();
        }
        for (int p = 0; p <= p_max; ++p) {
            auto f = [&](double k) { return sph_bessel_j(p, cplx{k * radius, 0.0}).real(); };
            auto df = [&](double k) { return radius * sph_bessel_j_deriv(p, cplx{k * radius, 0.0}).real(); };
            for (const RootCandidate& c : find_real_roots(grid, values[p], f, df, options.roots)) {
                if (c.hint == Multiplicity::SimpleSignChange) out.push_back({c.x, p, ball});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    return out;
}

std::vector<double> track_root(int p, double k_start, std::span<const ConductiveSphere> path,
                               const TrackOptions& options) {
    std::vector<double> ks;
    if (path.empty()) return ks;
    ks.push_back(k_start);
    ScanOptions local;
    local.grid_step = options.search_step;
    double shift = 0.0;
    for (std::size_t step = 1; step < path.size(); ++step) {
        const double prev = ks.back();
        const double predicted = prev + shift;
        double window = std::clamp(3.0 * std::abs(shift), options.min_window, options.max_window);
        std::vector<EigenvalueRecord> found;
        while (true) {
            const KInterval iv{std::max(predicted - window, 1e-3), predicted + window};
            found = mode_roots(path[step], p, iv, local);
            if (!found.empty() || window >= options.max_window) break;
            window = std::min(2.0 * window, options.max_window);
        }
        if (found.empty()) {
            std::ostringstream msg;
            msg << "lost eigenvalue curve of mode p=" << p << " near k=" << prev << " (eta="
                << path[step].eta << ", n=" << path[step].index << ")";
            throw TrackingError(msg.str());
        }
        std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.k - predicted) < std::abs(b.k - predicted);
        });
        if (found.size() > 1) {
            const double d0 = std::abs(found[0].k - predicted);
            const double d1 = std::abs(found[1].k - predicted);
            if (d1 - d0 <= options.ambiguity_tol && std::abs(found[0].k - found[1].k) > options.ambiguity_tol) {
                std::ostringstream msg;
                msg << "ambiguous continuation for mode p=" << p << ": roots " << found[0].k << " and "
                    << found[1].k << " equidistant from prediction " << predicted;
                throw TrackingError(msg.str());
            }
        }
        ks.push_back(found[0].k);
        shift = found[0].k - prev;
    }
    return ks;
}

EigenvalueRecord eigenvalue_by_index(const ConductiveSphere& medium, int index, double k_hi,
                                     int p_max, const ScanOptions& options) {
    if (index < 1) throw std::invalid_argument("eigenvalue index is 1-based");
    const auto records = scan_real_eigenvalues(medium, {0.05, k_hi}, p_max, options);
    if (static_cast<int>(records.size()) < index) {
        throw std::runtime_error("only " + std::to_string(records.size()) +
                                 " eigenvalues below k = " + std::to_string(k_hi) +
                                 "; requested index " + std::to_string(index));
    }
    return records[static_cast<std::size_t>(index - 1)];
}

std::vector<ConductiveSphere> continuation_path(const ConductiveSphere& a, const ConductiveSphere& b,
                                                double max_step, bool geometric) {
    if (!(max_step > 0.0)) throw std::invalid_argument("continuation step must be positive");
    const bool geo = geometric && a.eta > 0.0 && b.eta > 0.0;
    const double eta_span = geo ? std::abs(std::log(b.eta / a.eta)) : std::abs(b.eta - a.eta);
    const double steps_d = std::max({std::ceil(eta_span / max_step),
                                     std::ceil(std::abs(b.index - a.index) / max_step), 1.0});
    const int steps = static_cast<int>(steps_d);
    std::vector<ConductiveSphere> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        ConductiveSphere m = a;
        m.index = a.index + t * (b.index - a.index);
        m.eta = geo ? a.eta * std::pow(b.eta / a.eta, t) : a.eta + t * (b.eta - a.eta);
        m.radius = a.radius + t * (b.radius - a.radius);
        path.push_back(m);
    }
    path.back() = b;
    return path;
}

std::vector<EocRow> eoc_from_sequence(std::span<const double> etas, std::span<const double> ks,
                                      double k_reference, int index) {
    if (etas.size() != ks.size()) throw std::invalid_argument("eta and k sequences differ in length");
    std::vector<EocRow> rows;
    for (std::size_t j = 0; j < etas.size(); ++j) {
        EocRow row;
        row.eta = etas[j];
        row.index = index;
        row.k = ks[j];
        row.abs_error = std::abs(k_reference - ks[j]);
        if (j > 0 && rows.back().abs_error > 0.0 && row.abs_error > 0.0) {
            row.eoc = std::log(rows.back().abs_error / row.abs_error) / std::log(2.0);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<EocRow> eoc_table(const ConductiveSphere& base, std::span<const double> etas,
                              std::span<const int> indices, const EocOptions& options) {
    if (etas.empty()) throw std::invalid_argument("eta sequence is empty");
    for (std::size_t j = 0; j + 1 < etas.size(); ++j) {
        if (!(etas[j + 1] > 0.0) || std::abs(etas[j] / etas[j + 1] - 2.0) > 1e-9) {
            throw std::invalid_argument("eta sequence must halve at every step");
        }
    }
    std::vector<EocRow> table;
    for (const int index : indices) {
        ConductiveSphere start = base;
        start.eta = etas.front();
        const EigenvalueRecord rec =
            eigenvalue_by_index(start, index, options.k_hi, options.p_max, options.scan);

        std::vector<double> ks{rec.k};
        double k = rec.k;
        for (std::size_t j = 1; j < etas.size(); ++j) {
            ConductiveSphere from = base, to = base;
            from.eta = etas[j - 1];
            to.eta = etas[j];
            const auto path = continuation_path(from, to, 0.05, true);
            k = track_root(rec.p, k, path, options.track).back();
            ks.push_back(k);
        }
        ConductiveSphere from = base, to = base;
        from.eta = etas.back();
        to.eta = 0.0;
        const auto path = continuation_path(from, to, etas.back() / 16.0, false);
        const double k_ref = track_root(rec.p, k, path, options.track).back();

        auto rows = eoc_from_sequence(etas, ks, k_ref, index);
        table.insert(table.end(), rows.begin(), rows.end());
    }
    return table;
}

FirstEigenvalue first_eigenvalue(const ConductiveSphere& medium, int p_max, const ScanOptions& options) {
    constexpr double kWindow = 4.0;
    constexpr double kLimit = 40.0;
    double lo = 0.01;
    while (lo < kLimit) {
        const double hi = lo + kWindow;
        const int needed = static_cast<int>(std::ceil(hi * medium.radius * std::max(1.0, medium.sqrt_index()))) + 8;
        const int orders = std::min(kMaxOrder, std::max(p_max, needed));
        const auto records = scan_real_eigenvalues(medium, {lo, hi}, orders, options);
        if (!records.empty()) return {medium.eta, records.front().k, records.front().p};
        lo = hi;
    }
    throw std::runtime_error("no transmission eigenvalue below k = " + std::to_string(kLimit));
}

std::vector<FirstEigenvalue> monotonicity_sweep(const ConductiveSphere& base,
                                                std::span<const double> etas, int p_max,
                                                const ScanOptions& options) {
    std::vector<FirstEigenvalue> out;
    out.reserve(etas.size());
    for (const double eta : etas) {
        if (!(eta > 0.0)) throw std::invalid_argument("monotonicity sweep requires eta > 0");
        ConductiveSphere m = base;
        m.eta = eta;
        out.push_back(first_eigenvalue(m, p_max, options));
    }
    return out;
}

std::optional<Crossover> detect_crossover(const ConductiveSphere& base, int index_a, int index_b,
                                          double eta_from, double eta_to, double k_hi, int p_max) {
    ConductiveSphere from = base, to = base;
    from.eta = eta_from;
    to.eta = eta_to;
    const EigenvalueRecord a = eigenvalue_by_index(from, index_a, k_hi, p_max);
    const EigenvalueRecord b = eigenvalue_by_index(from, index_b, k_hi, p_max);
    const auto path = continuation_path(from, to, 0.02, true);
    const auto ka = track_root(a.p, a.k, path);
    const auto kb = track_root(b.p, b.k, path);
    const bool initially_below = ka.front() < kb.front();
    for (std::size_t j = 1; j < path.size(); ++j) {
        if ((ka[j] < kb[j]) != initially_below) {
            return Crossover{path[j - 1].eta, path[j].eta, ka[j - 1], kb[j - 1], ka[j], kb[j]};
        }
    }
    return std::nullopt;
}

}  // namespace ite
