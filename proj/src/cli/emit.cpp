#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ite/cli.hpp"

namespace ite::cli {
namespace {

using json = nlohmann::ordered_json;

std::string csv_cell(const Field& f) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return format_double(d); }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, f);
}

json field_to_json(const Field& f) {
    struct Visitor {
        json operator()(std::monostate) const { return nullptr; }
        json operator()(bool b) const { return b; }
        json operator()(std::int64_t i) const { return i; }
        json operator()(double d) const { return d; }
        json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, f);
}

Field field_from_json(const json& j) {
    if (j.is_null()) return std::monostate{};
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    throw std::runtime_error("unsupported JSON record value: " + j.dump());
}

Field field_from_csv(const std::string& s) {
    if (s.empty()) return std::monostate{};
    if (s == "true") return true;
    if (s == "false") return false;
    std::int64_t i = 0;
    const char* end = s.data() + s.size();
    auto [pi, ei] = std::from_chars(s.data(), end, i);
    if (ei == std::errc{} && pi == end) return i;
    double d = 0.0;
    auto [pd, ed] = std::from_chars(s.data(), end, d);
    if (ed == std::errc{} && pd == end) return d;
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const ResultEnvelope& env) {
    std::string out;
    for (std::size_t c = 0; c < env.columns.size(); ++c) {
        if (c) out += ',';
        out += env.columns[c];
    }
    out += '\n';
    for (const auto& row : env.records) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

ResultEnvelope envelope_from_csv(const std::string& text) {
    ResultEnvelope env;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV without header row");
    env.columns = split(line, ',');
    while (std::getline(in, line)) {
        std::vector<Field> row;
        for (const std::string& cell : split(line, ',')) row.push_back(field_from_csv(cell));
        if (row.size() != env.columns.size()) throw std::runtime_error("CSV row width differs from header");
        env.records.push_back(std::move(row));
    }
    return env;
}

std::string to_json(const ResultEnvelope& env) {
    json j;
    j["command"] = env.command;
    j["version"] = env.version;
    j["config"] = env.config;
    j["wall_time_s"] = env.wall_time_s ? json(*env.wall_time_s) : json(nullptr);
    j["columns"] = env.columns;
    json records = json::array();
    for (const auto& row : env.records) {
        json r = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) r[env.columns[c]] = field_to_json(row[c]);
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
    j["warnings"] = env.warnings;
    return j.dump(2) + "\n";
}

ResultEnvelope envelope_from_json(const std::string& text) {
    const json j = json::parse(text);
    ResultEnvelope env;
    env.command = j.at("command").get<std::string>();
    env.version = j.at("version").get<std::string>();
    env.config = j.at("config");
    if (!j.at("wall_time_s").is_null()) env.wall_time_s = j.at("wall_time_s").get<double>();
    env.columns = j.at("columns").get<std::vector<std::string>>();
    for (const json& r : j.at("records")) {
        std::vector<Field> row;
        for (const std::string& c : env.columns) row.push_back(field_from_json(r.at(c)));
        env.records.push_back(std::move(row));
    }
    env.warnings = j.at("warnings").get<std::vector<std::string>>();
    return env;
}

void emit(const ResultEnvelope& env, Format format, const std::string& path, std::ostream& out) {
    const std::string text = format == Format::Json ? to_json(env) : to_csv(env);
    if (path.empty()) {
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("failed writing results to standard output");
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "': " + std::strerror(errno));
    file << text;
    file.close();
    if (!file) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace ite::cli
