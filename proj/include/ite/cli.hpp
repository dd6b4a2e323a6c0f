#pragma once

// Command-line front end: configuration, dispatch and serialization.
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace ite::cli {

enum class Command { Sweep, Beyn, Bie, Lsm, Eoc, Monotonicity, Dirichlet };
enum class Format { Csv, Json };

struct RunConfig {
    Command command = Command::Sweep;
    double radius = 1.0;
    double n = 4.0;
    double eta = 1.0;
    double kmin = 0.1;
    double kmax = 5.0;
    double grid_step = 1e-3;
    int pmax = 25;
    // contour solvers; semi axes <= 0 derive the ellipse from [kmin, kmax]
    double center_re = 0.0;
    double center_im = 0.0;
    double semi_real = 0.0;
    double semi_imag = 0.1;
    int nodes = 64;
    int probe = 0;
    int moments = 4;
    // lsm
    double kstep = 0.01;
    double delta = 0.005;
    std::uint64_t seed = 20190301;
    std::array<double, 3> z{0.0, 0.0, 0.0};
    int polar = 16;
    int azimuthal = 32;
    bool minus_phase = false;
    // eoc
    std::vector<int> indices{2, 4, 6};
    double eta_max = 1.0;
    int halvings = 8;
    // monotonicity
    std::vector<double> etas{0.01, 0.1, 0.25, 0.5, 1, 2, 3, 10, 100, 1000, 10000};
    // output
    std::string output;  // empty: stdout
    Format format = Format::Csv;
    bool timing = false;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

std::string to_string(Command c);

struct ParseResult {
    std::optional<RunConfig> config;  // empty when help or version was requested
    std::string message;              // help/version text
};

/// Flags override values from --config FILE (flat `key = value` lines, keys
/// are the long flag names). Unknown keys and flags throw ConfigError.
ParseResult parse_config(int argc, const char* const* argv);

using Field = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct ResultEnvelope {
    std::string command;
    std::string version;
    nlohmann::ordered_json config;  // effective configuration
    std::optional<double> wall_time_s;
    std::vector<std::string> columns;
    std::vector<std::vector<Field>> records;
    std::vector<std::string> warnings;

    bool operator==(const ResultEnvelope&) const = default;
};

nlohmann::ordered_json config_echo(const RunConfig& config);

/// Dispatches to the numerical modules. Numerical failures propagate as exceptions.
ResultEnvelope run(const RunConfig& config);

std::string to_csv(const ResultEnvelope& env);
std::string to_json(const ResultEnvelope& env);
ResultEnvelope envelope_from_json(const std::string& text);
/// Parses a CSV produced by to_csv back into columns and records (strings
/// for non-numeric cells, empty cells as null).
ResultEnvelope envelope_from_csv(const std::string& text);

/// Writes to `path`, or `out` when path is empty. Throws std::runtime_error
/// naming the path on I/O failure.
void emit(const ResultEnvelope& env, Format format, const std::string& path, std::ostream& out);

/// Full CLI: parse, run, emit; returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string format_double(double v);

}  // namespace ite::cli
