#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "ite/bie_sphere.hpp"
#include "ite/cli.hpp"
#include "ite/errors.hpp"
#include "ite/farfield_lsm.hpp"
#include "ite/nep_beyn.hpp"
#include "ite/sphere_modal.hpp"

namespace ite::cli {
namespace {

ConductiveSphere medium_of(const RunConfig& c) { return {c.radius, c.n, c.eta}; }

void eigen_columns(ResultEnvelope& env) { env.columns = {"k", "p", "multiplicity_hint", "residual"}; }

void add_eigen_record(ResultEnvelope& env, double k, int p, Multiplicity hint, double residual) {
    env.records.push_back({k, static_cast<std::int64_t>(p), to_string(hint), residual});
}

void run_sweep(const RunConfig& c, ResultEnvelope& env) {
    ScanOptions opts;
    opts.grid_step = c.grid_step;
    eigen_columns(env);
    for (const auto& r : scan_real_eigenvalues(medium_of(c), {c.kmin, c.kmax}, c.pmax, opts)) {
        add_eigen_record(env, r.k, r.p, r.multiplicity_hint, r.residual);
    }
}

void run_dirichlet(const RunConfig& c, ResultEnvelope& env) {
    ScanOptions opts;
    opts.grid_step = c.grid_step;
    env.columns = {"k", "p", "ball"};
    for (const auto& d : dirichlet_limit_eigenvalues(medium_of(c), {c.kmin, c.kmax}, c.pmax, opts)) {
        env.records.push_back({d.k, static_cast<std::int64_t>(d.p),
                               std::string(d.ball == DirichletBall::Radius ? "radius" : "scaled_radius")});
    }
}

void run_contour(const RunConfig& c, ResultEnvelope& env, bool boundary_integral) {
    EllipticContour contour;
    if (c.semi_real > 0.0) {
        contour.center = {c.center_re, c.center_im};
        contour.semi_axis_real = c.semi_real;
    } else {
        contour.center = {0.5 * (c.kmin + c.kmax), c.center_im};
        contour.semi_axis_real = 0.5 * (c.kmax - c.kmin);
    }
    contour.semi_axis_imag = c.semi_imag;
    contour.node_count = c.nodes;
    BeynConfig cfg;
    cfg.probe_columns = c.probe;
    cfg.rng_seed = c.seed;
    cfg.moments = c.moments;
    std::vector<int> orders;
    for (int p = 0; p <= c.pmax; ++p) orders.push_back(p);
    const ConductiveSphere medium = medium_of(c);
    const auto found = boundary_integral ? z_block_nep(medium, orders, contour, cfg)
                                         : modal_block_nep(medium, orders, contour, cfg);
    eigen_columns(env);
    for (const auto& e : found) {
        if (std::abs(e.lambda.imag()) > 1e-6 * std::max(1.0, std::abs(e.lambda))) {
            env.warnings.push_back("non-real eigenvalue " + format_double(e.lambda.real()) + " + " +
                                   format_double(e.lambda.imag()) + "i (p = " + std::to_string(e.block) +
                                   ") omitted from the real-valued records");
            continue;
        }
        if (e.near_boundary) {
            env.warnings.push_back("eigenvalue " + format_double(e.lambda.real()) + " lies within " +
                                   "the boundary tolerance of the contour");
        }
        const Multiplicity hint = e.multiplicity > 1 ? Multiplicity::TouchingZero : Multiplicity::SimpleSignChange;
        add_eigen_record(env, e.lambda.real(), e.block, hint, e.residual);
    }
}

void run_lsm(const RunConfig& c, ResultEnvelope& env) {
    std::vector<double> ks;
    const auto count = static_cast<std::size_t>(std::floor((c.kmax - c.kmin) / c.kstep + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) ks.push_back(c.kmin + static_cast<double>(i) * c.kstep);
    LsmOptions opts;
    opts.polar_nodes = c.polar;
    opts.azimuthal_nodes = c.azimuthal;
    opts.delta = c.delta;
    opts.seed = c.seed;
    opts.sampling_point = {c.z[0], c.z[1], c.z[2]};
    opts.sign = c.minus_phase ? PhaseSign::Minus : PhaseSign::Plus;
    const LsmCurve curve = lsm_scan(medium_of(c), ks, opts);
    env.columns = {"k", "gnorm", "is_peak"};
    std::vector<bool> peak(ks.size(), false);
    for (const auto& p : curve.peaks) peak[p.index] = true;
    for (std::size_t i = 0; i < ks.size(); ++i) env.records.push_back({ks[i], curve.gnorm[i], bool(peak[i])});
    env.warnings.insert(env.warnings.end(), curve.warnings.begin(), curve.warnings.end());
}

void run_eoc(const RunConfig& c, ResultEnvelope& env) {
    std::vector<double> etas;
    for (int j = 0; j <= c.halvings; ++j) etas.push_back(std::ldexp(c.eta_max, -j));
    EocOptions opts;
    opts.p_max = c.pmax;
    const ConductiveSphere base{c.radius, c.n, etas.front()};
    env.columns = {"eta", "index", "abs_error", "eoc"};
    for (const auto& row : eoc_table(base, etas, c.indices, opts)) {
        env.records.push_back({row.eta, static_cast<std::int64_t>(row.index), row.abs_error,
                               row.eoc ? Field{*row.eoc} : Field{std::monostate{}}});
    }
}

void run_monotonicity(const RunConfig& c, ResultEnvelope& env) {
    const auto sweep = monotonicity_sweep(medium_of(c), c.etas, c.pmax);
    env.columns = {"eta", "k", "p"};
    for (const auto& f : sweep) env.records.push_back({f.eta, f.k, static_cast<std::int64_t>(f.p)});
    const bool ascending_etas = std::is_sorted(c.etas.begin(), c.etas.end());
    if (!ascending_etas) {
        env.warnings.push_back("eta list not ascending; monotonicity not assessed");
        return;
    }
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        const bool ok = c.n > 1.0 ? sweep[i].k < sweep[i - 1].k : sweep[i].k > sweep[i - 1].k;
        if (!ok) {
            env.warnings.push_back("first eigenvalue not strictly monotone between eta = " +
                                   format_double(sweep[i - 1].eta) + " and " + format_double(sweep[i].eta));
        }
    }
}

}  // namespace

ResultEnvelope run(const RunConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    ResultEnvelope env;
    env.command = to_string(config.command);
    env.version = ITE_VERSION;
    env.config = config_echo(config);
    switch (config.command) {
        case Command::Sweep: run_sweep(config, env); break;
        case Command::Dirichlet: run_dirichlet(config, env); break;
        case Command::Beyn: run_contour(config, env, false); break;
        case Command::Bie: run_contour(config, env, true); break;
        case Command::Lsm: run_lsm(config, env); break;
        case Command::Eoc: run_eoc(config, env); break;
        case Command::Monotonicity: run_monotonicity(config, env); break;
    }
    if (config.timing) {
        env.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return env;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        ParseResult parsed = parse_config(argc, argv);
        if (!parsed.config) {
            out << parsed.message;
            return 0;
        }
        config = *parsed.config;
    } catch (const ConfigError& e) {
        err << "ite: configuration error: " << e.what() << '\n';
        return 2;
    }
    try {
        const ResultEnvelope env = run(config);
        for (const auto& w : env.warnings) err << "ite: warning: " << w << '\n';
        emit(env, config.format, config.output, out);
    } catch (const ConfigError& e) {
        err << "ite: configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        err << "ite: numerical failure: " << e.what() << " (bracket [" << format_double(e.bracket_lo()) << ", "
            << format_double(e.bracket_hi()) << "])\n";
        return 1;
    } catch (const std::exception& e) {
        err << "ite: numerical failure: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace ite::cli
