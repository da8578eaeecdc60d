#include "gbt/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "gbt/errors.hpp"

namespace gbt {

namespace {

const std::set<std::string> kSuites{"cut", "map", "tower", "ulam", "decay", "lowerbound", "decay2d"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& msg) {
    std::ostringstream os;
    if (line > 0) os << "config line " << line << ": ";
    os << "field '" << key << "': " << msg;
    throw ConfigError(key, line, os.str());
}

double to_real(const std::string& key, const std::string& v, int line) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out)) {
        fail(key, line, "expected a real number, got '" + v + "'");
    }
    return out;
}

double to_positive(const std::string& key, const std::string& v, int line) {
    const double x = to_real(key, v, line);
    if (!(x > 0.0)) fail(key, line, "must be positive, got " + v);
    return x;
}

std::uint64_t to_count(const std::string& key, const std::string& v, int line, bool allow_zero) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    // Accept 1e6 style counts as well as plain integers.
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec == std::errc() && r.ptr == end) {
        if (out == 0 && !allow_zero) fail(key, line, "must be positive, got " + v);
        return out;
    }
    const double x = to_real(key, v, line);
    if (x < 0.0 || x != std::floor(x) || x > 1.8e19) fail(key, line, "expected a non-negative integer, got '" + v + "'");
    if (x == 0.0 && !allow_zero) fail(key, line, "must be positive, got " + v);
    return static_cast<std::uint64_t>(x);
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) fail(key, line, "empty value");
    if (key == "kind") {
        if (v != "constant" && v != "linear" && v != "sympow" && v != "asympow" && v != "custom") {
            fail(key, line, "unknown cut kind '" + v + "'");
        }
        kind = v;
    } else if (key == "alpha") {
        alpha = to_positive(key, v, line);
    } else if (key == "alpha_prime") {
        alpha_prime = to_positive(key, v, line);
    } else if (key == "constant") {
        constant = to_real(key, v, line);
        if (!(constant > 0.0 && constant < 1.0)) fail(key, line, "must lie in (0,1), got " + v);
    } else if (key == "custom_table") {
        custom_table = v;
    } else if (key == "root_tol") {
        root_tol = to_positive(key, v, line);
    } else if (key == "depth") {
        depth = to_count(key, v, line, false);
    } else if (key == "cells") {
        cells = to_count(key, v, line, false);
    } else if (key == "ulam_steps") {
        ulam_steps = to_count(key, v, line, false);
    } else if (key == "nmax") {
        nmax = to_count(key, v, line, false);
    } else if (key == "samples") {
        samples = to_count(key, v, line, false);
    } else if (key == "grid") {
        grid = to_count(key, v, line, false);
    } else if (key == "seed") {
        seed = to_count(key, v, line, true);
    } else if (key == "threads") {
        threads = static_cast<int>(to_count(key, v, line, true));
    } else if (key == "output_dir") {
        output_dir = v;
    } else if (key == "suites") {
        std::string list = v;
        for (char& c : list) {
            if (c == ',') c = ' ';
        }
        std::istringstream is(list);
        std::set<std::string> chosen;
        std::string s;
        while (is >> s) {
            if (!kSuites.count(s)) fail(key, line, "unknown suite '" + s + "'");
            chosen.insert(s);
        }
        suites = chosen;
    } else {
        fail(key, line, "unknown key");
    }
}

void ExperimentConfig::validate() const {
    if (kind == "custom" && custom_table.empty()) {
        fail("custom_table", 0, "required when kind = custom");
    }
    if (cells < 2) fail("cells", 0, "must be at least 2");
    if (depth < 1) fail("depth", 0, "must be at least 1");
}

CutFunction ExperimentConfig::make_cut() const {
    if (kind == "custom") {
        std::ifstream in(custom_table);
        if (!in) fail("custom_table", 0, "cannot open '" + custom_table + "'");
        std::vector<double> t;
        std::vector<double> phi;
        std::string row;
        int line = 0;
        while (std::getline(in, row)) {
            ++line;
            row = trim(row);
            if (row.empty() || row[0] == '#' || std::isalpha(static_cast<unsigned char>(row[0]))) continue;
            const auto comma = row.find(',');
            if (comma == std::string::npos) fail("custom_table", line, "expected 't,phi'");
            t.push_back(to_real("custom_table", trim(row.substr(0, comma)), line));
            phi.push_back(to_real("custom_table", trim(row.substr(comma + 1)), line));
        }
        return CutFunction::custom(std::move(t), std::move(phi), alpha, alpha_prime);
    }
    return gbt::make_cut(kind, alpha, kind == "asympow" ? alpha_prime : alpha, constant);
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string row;
    int line = 0;
    while (std::getline(in, row)) {
        ++line;
        const auto hash = row.find('#');
        if (hash != std::string::npos) row.erase(hash);
        row = trim(row);
        if (row.empty()) continue;
        const auto eq = row.find('=');
        if (eq == std::string::npos) fail(row, line, "expected 'key = value'");
        const std::string key = trim(row.substr(0, eq));
        if (key.empty()) fail("", line, "missing key before '='");
        cfg.set(key, row.substr(eq + 1), line);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", 0, "cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace gbt
