#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ite/cli.hpp"
#include "ite/errors.hpp"

namespace cli = ite::cli;

namespace {

struct Argv {
    std::vector<std::string> store;
    std::vector<const char*> ptrs;
    explicit Argv(std::vector<std::string> args) : store(std::move(args)) {
        store.insert(store.begin(), "ite");
        for (const auto& s : store) ptrs.push_back(s.c_str());
    }
    int argc() const { return static_cast<int>(ptrs.size()); }
    const char* const* argv() const { return ptrs.data(); }
};

cli::RunConfig parse(std::vector<std::string> args) {
    const Argv a(std::move(args));
    auto r = cli::parse_config(a.argc(), a.argv());
    REQUIRE(r.config.has_value());
    return *r.config;
}

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
    const Argv a(std::move(args));
    std::ostringstream out, err;
    const int code = cli::main_entry(a.argc(), a.argv(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("flags parse into a run configuration") {
    const auto c = parse({"sweep", "--n", "4", "--eta", "1", "--kmin", "0.1", "--kmax", "5", "--pmax", "25"});
    CHECK(c.command == cli::Command::Sweep);
    CHECK(c.n == 4.0);
    CHECK(c.eta == 1.0);
    CHECK(c.kmin == 0.1);
    CHECK(c.kmax == 5.0);
    CHECK(c.pmax == 25);
    const auto e = parse({"eoc", "--indices", "2,4"});
    CHECK(e.command == cli::Command::Eoc);
    CHECK(e.indices == std::vector<int>{2, 4});
}

TEST_CASE("invalid configurations are rejected with exit code 2") {
    const Argv a({"sweep", "--n", "1"});
    try {
        cli::parse_config(a.argc(), a.argv());
        FAIL("n = 1 accepted");
    } catch (const ite::ConfigError& e) {
        CHECK(std::string(e.what()).find("n = 1") != std::string::npos);
    }
    const auto o = run_cli({"sweep", "--n", "1"});
    CHECK(o.code == 2);
    CHECK(o.err.find("n = 1") != std::string::npos);
    CHECK(run_cli({"sweep", "--kmin", "5", "--kmax", "1"}).code == 2);
    CHECK(run_cli({"sweep", "--bogus", "3"}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({}).code == 2);
}

TEST_CASE("config file values are overridden by flags; unknown keys rejected") {
    const auto file = temp_file("ite_test_config.ini", "# medium\neta = 3\nn = 2.5\n");
    const auto c = parse({"sweep", "--config", file.string(), "--eta", "1"});
    CHECK(c.eta == 1.0);
    CHECK(c.n == 2.5);
    const auto bad = temp_file("ite_test_bad.ini", "eta = 3\ncolour = blue\n");
    const Argv a({"sweep", "--config", bad.string()});
    try {
        cli::parse_config(a.argc(), a.argv());
        FAIL("unknown key accepted");
    } catch (const ite::ConfigError& e) {
        CHECK(std::string(e.what()).find("colour") != std::string::npos);
    }
    CHECK(run_cli({"sweep", "--config", bad.string()}).code == 2);
    std::filesystem::remove(file);
    std::filesystem::remove(bad);
}

TEST_CASE("sweep output matches the eta = 1 row") {
    const auto o = run_cli({"sweep", "--n", "4", "--eta", "1", "--kmin", "0.1", "--kmax", "5", "--pmax", "25"});
    REQUIRE(o.code == 0);
    const auto env = cli::envelope_from_csv(o.out);
    CHECK(env.columns == std::vector<std::string>{"k", "p", "multiplicity_hint", "residual"});
    REQUIRE(env.records.size() >= 6);
    const double expected[] = {2.798386, 3.029807, 3.141593, 3.601813, 4.184685, 4.764588};
    for (int i = 0; i < 6; ++i) CHECK(std::abs(std::get<double>(env.records[static_cast<std::size_t>(i)][0]) - expected[i]) <= 5e-6);
}

TEST_CASE("eoc command reproduces the convergence orders") {
    const auto o = run_cli({"eoc", "--n", "4"});
    REQUIRE(o.code == 0);
    const auto env = cli::envelope_from_csv(o.out);
    CHECK(env.columns == std::vector<std::string>{"eta", "index", "abs_error", "eoc"});
    CHECK(env.records.size() == 27);
    CHECK(std::holds_alternative<std::monostate>(env.records[0][3]));
    CHECK(std::abs(std::get<double>(env.records[1][3]) - 1.032) <= 0.02);
}

TEST_CASE("numerical failures exit with code 1") {
    // contour node lands exactly on the root pi of the p = 0 block
    const auto o = run_cli({"beyn", "--kmin", "2.0", "--kmax", "3.141592653589793", "--pmax", "2"});
    CHECK(o.code == 1);
    CHECK(o.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("csv formatting") {
    cli::ResultEnvelope env;
    env.columns = {"k", "gnorm", "is_peak"};
    CHECK(cli::to_csv(env) == "k,gnorm,is_peak\n");
    env.records.push_back({0.1, 1.0 / 3.0, true});
    const std::string csv = cli::to_csv(env);
    CHECK(csv == "k,gnorm,is_peak\n0.10000000000000001,0.33333333333333331,true\n");
    CHECK(csv.find('\r') == std::string::npos);
    const auto back = cli::envelope_from_csv(csv);
    CHECK(std::get<double>(back.records[0][1]) == 1.0 / 3.0);
    CHECK(cli::to_csv(back) == csv);
    for (double v : {3.0e-300, 2.798386045783886, -1.0 / 7.0, 6.02214076e23}) {
        CHECK(std::stod(cli::format_double(v)) == v);
    }
}

TEST_CASE("json round trip is lossless and byte identical") {
    cli::ResultEnvelope env;
    env.command = "sweep";
    env.version = "x";
    env.config = {{"n", 4.0}, {"eta", 0.1}, {"pmax", 25}};
    env.columns = {"k", "p", "multiplicity_hint", "residual"};
    env.records.push_back({2.798386045783886, std::int64_t{0}, std::string("simple_sign_change"), 1.3877787807814457e-17});
    env.records.push_back({0.1 + 0.2, std::int64_t{3}, std::string("touching_zero"), 0.0});
    env.warnings = {"w"};
    const std::string text = cli::to_json(env);
    const auto back = cli::envelope_from_json(text);
    CHECK(back == env);
    CHECK(cli::to_json(back) == text);
    env.wall_time_s = 0.25;
    CHECK(cli::envelope_from_json(cli::to_json(env)) == env);
}

TEST_CASE("same configuration gives byte-identical files") {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string a = (dir / "ite_det_a.json").string(), b = (dir / "ite_det_b.json").string();
    const std::vector<std::string> base{"lsm", "--kmin", "2.7", "--kmax", "2.74", "--polar", "6", "--azimuthal", "12",
                                        "--format", "json", "--seed", "9", "-o"};
    auto args_a = base, args_b = base;
    args_a.push_back(a);
    args_b.push_back(b);
    REQUIRE(run_cli(args_a).code == 0);
    REQUIRE(run_cli(args_b).code == 0);
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    CHECK(!slurp(a).empty());
    CHECK(slurp(a) == slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("I/O failure names the path") {
    cli::ResultEnvelope env;
    env.columns = {"k"};
    std::ostringstream sink;
    try {
        cli::emit(env, cli::Format::Csv, "/nonexistent-dir/out.csv", sink);
        FAIL("write succeeded");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
    }
}

TEST_CASE("help exits cleanly") {
    const auto o = run_cli({"--help"});
    CHECK(o.code == 0);
    CHECK(o.out.find("sweep") != std::string::npos);
}
