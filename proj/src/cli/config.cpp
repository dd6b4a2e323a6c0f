#include <CLI11.hpp>
#include <cmath>
#include <sstream>

#include "ite/cli.hpp"
#include "ite/errors.hpp"
#include "ite/sphere_modal.hpp"

namespace ite::cli {
namespace {

struct CommandName {
    Command command;
    const char* name;
    const char* help;
};

constexpr CommandName kCommands[] = {
    {Command::Sweep, "sweep", "real eigenvalues by modal determinant root scan"},
    {Command::Beyn, "beyn", "contour eigensolver on the block-diagonal modal matrices"},
    {Command::Bie, "bie", "contour eigensolver on the block-diagonal boundary-integral operator"},
    {Command::Lsm, "lsm", "linear sampling indicator k -> ||g_z||"},
    {Command::Eoc, "eoc", "convergence order of eigenvalues as eta halves toward 0"},
    {Command::Monotonicity, "monotonicity", "first eigenvalue over a list of eta"},
    {Command::Dirichlet, "dirichlet", "eta -> infinity limit: Dirichlet eigenvalues of both balls"},
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& entry : kCommands) {
        if (entry.command == c) return entry.name;
    }
    return "?";
}

void RunConfig::validate() const {
    ConductiveSphere{radius, n, eta}.validate();
    require(std::isfinite(kmin) && std::isfinite(kmax) && kmin > 0.0 && kmin < kmax,
            "k range must satisfy 0 < kmin < kmax");
    require(grid_step > 0.0, "grid-step must be positive");
    require(pmax >= 0 && pmax <= kMaxOrder, "pmax must lie in [0, " + std::to_string(kMaxOrder) + "]");
    require(nodes >= 8 && nodes % 2 == 0, "nodes must be even and >= 8");
    require(probe >= 0, "probe must be >= 0");
    require(moments >= 1, "moments must be >= 1");
    require(semi_imag > 0.0, "semi-imag must be positive");
    require(kstep > 0.0, "kstep must be positive");
    require(delta > 0.0, "delta must be positive");
    require(polar >= 1 && azimuthal >= 1, "direction grid sizes must be positive");
    require(!indices.empty(), "indices must not be empty");
    for (int i : indices) require(i >= 1, "eigenvalue indices are 1-based");
    require(eta_max > 0.0, "eta-max must be positive");
    require(halvings >= 1, "halvings must be >= 1");
    require(!etas.empty(), "etas must not be empty");
    for (double e : etas) require(e > 0.0, "monotonicity etas must be positive");
}

ParseResult parse_config(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"Interior transmission eigenvalues of a conductive ball", "ite"};
    app.set_version_flag("--version", std::string(ITE_VERSION));
    app.set_config("--config", "", "flat key = value file; keys are long flag names");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    for (const auto& entry : kCommands) {
        CLI::App* sub = app.add_subcommand(entry.name, entry.help);
        sub->fallthrough();
        sub->callback([&cfg, c = entry.command] { cfg.command = c; });
    }

    app.add_option("--radius", cfg.radius, "ball radius R")->capture_default_str();
    app.add_option("--n", cfg.n, "refractive index (n != 1)")->capture_default_str();
    app.add_option("--eta", cfg.eta, "boundary conductivity")->capture_default_str();
    app.add_option("--kmin", cfg.kmin)->capture_default_str();
    app.add_option("--kmax", cfg.kmax)->capture_default_str();
    app.add_option("--grid-step", cfg.grid_step, "root scan grid step")->capture_default_str();
    app.add_option("--pmax", cfg.pmax, "highest mode order")->capture_default_str();
    app.add_option("--center-re", cfg.center_re, "contour center (real)")->capture_default_str();
    app.add_option("--center-im", cfg.center_im, "contour center (imag)")->capture_default_str();
    app.add_option("--semi-real", cfg.semi_real, "real semi-axis; <= 0 spans [kmin, kmax]")->capture_default_str();
    app.add_option("--semi-imag", cfg.semi_imag, "imaginary semi-axis")->capture_default_str();
    app.add_option("--nodes", cfg.nodes, "contour quadrature nodes")->capture_default_str();
    app.add_option("--probe", cfg.probe, "probe columns (0: automatic)")->capture_default_str();
    app.add_option("--moments", cfg.moments, "contour moment count (block Hankel size)")->capture_default_str();
    app.add_option("--kstep", cfg.kstep, "lsm k step")->capture_default_str();
    app.add_option("--delta", cfg.delta, "relative noise level")->capture_default_str();
    app.add_option("--seed", cfg.seed)->capture_default_str();
    app.add_option("--z", cfg.z, "sampling point x y z")->expected(3)->capture_default_str();
    app.add_option("--polar", cfg.polar, "Gauss-Legendre polar nodes")->capture_default_str();
    app.add_option("--azimuthal", cfg.azimuthal, "azimuthal nodes")->capture_default_str();
    app.add_flag("--minus-phase", cfg.minus_phase, "use exp(-ik x.z) in the sampling right-hand side");
    app.add_option("--indices", cfg.indices, "eoc eigenvalue indices (1-based)")->delimiter(',')->capture_default_str();
    app.add_option("--eta-max", cfg.eta_max, "largest eta of the eoc sequence")->capture_default_str();
    app.add_option("--halvings", cfg.halvings, "eoc: number of eta halvings")->capture_default_str();
    app.add_option("--etas", cfg.etas, "monotonicity eta list")->delimiter(',')->capture_default_str();
    app.add_option("--output,-o", cfg.output, "output path (default stdout)");
    std::string format = "csv";
    app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_flag("--timing", cfg.timing, "record wall time in the envelope");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, app.help()};
    } catch (const CLI::CallForAllHelp&) {
        return {std::nullopt, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::CallForVersion&) {
        return {std::nullopt, std::string(ITE_VERSION) + "\n"};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    cfg.validate();
    return {cfg, {}};
}

nlohmann::ordered_json config_echo(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["command"] = to_string(c.command);
    j["radius"] = c.radius;
    j["n"] = c.n;
    j["eta"] = c.eta;
    switch (c.command) {
        case Command::Sweep:
        case Command::Dirichlet:
            j["kmin"] = c.kmin;
            j["kmax"] = c.kmax;
            j["grid_step"] = c.grid_step;
            j["pmax"] = c.pmax;
            break;
        case Command::Beyn:
        case Command::Bie:
            j["kmin"] = c.kmin;
            j["kmax"] = c.kmax;
            j["pmax"] = c.pmax;
            j["center_re"] = c.center_re;
            j["center_im"] = c.center_im;
            j["semi_real"] = c.semi_real;
            j["semi_imag"] = c.semi_imag;
            j["nodes"] = c.nodes;
            j["probe"] = c.probe;
            j["moments"] = c.moments;
            j["seed"] = c.seed;
            break;
        case Command::Lsm:
            j["kmin"] = c.kmin;
            j["kmax"] = c.kmax;
            j["kstep"] = c.kstep;
            j["delta"] = c.delta;
            j["seed"] = c.seed;
            j["z"] = c.z;
            j["polar"] = c.polar;
            j["azimuthal"] = c.azimuthal;
            j["phase"] = c.minus_phase ? "minus" : "plus";
            break;
        case Command::Eoc:
            j["indices"] = c.indices;
            j["eta_max"] = c.eta_max;
            j["halvings"] = c.halvings;
            j["pmax"] = c.pmax;
            break;
        case Command::Monotonicity:
            j["etas"] = c.etas;
            j["pmax"] = c.pmax;
            break;
    }
    return j;
}

}  // namespace ite::cli
