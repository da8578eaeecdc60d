#include "gbt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gbt {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    if (values.size() != columns_) throw std::logic_error("csv row width mismatch");
    bool first = true;
    for (double v : values) {
        out_ << (first ? "" : ",") << format_real(v);
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(std::size_t n, std::initializer_list<double> values) {
    if (values.size() + 1 != columns_) throw std::logic_error("csv row width mismatch");
    out_ << n;
    for (double v : values) out_ << ',' << format_real(v);
    out_ << '\n';
}

nlohmann::ordered_json to_json(const PowerLawFit& fit) {
    nlohmann::ordered_json j;
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["window"] = {fit.n_lo, fit.n_hi};
    j["points"] = fit.points;
    j["residual_rms"] = fit.residual_rms;
    j["poor_fit"] = fit.poor_fit;
    return j;
}

nlohmann::ordered_json to_json(const CutFunction& cut) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(cut.kind());
    j["label"] = cut.label();
    if (std::isfinite(cut.alpha())) j["alpha"] = cut.alpha();
    if (std::isfinite(cut.alpha_prime())) j["alpha_prime"] = cut.alpha_prime();
    j["a"] = cut.total_integral();
    j["symmetric"] = cut.symmetric();
    return j;
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["kind"] = cfg.kind;
    j["alpha"] = cfg.alpha;
    j["alpha_prime"] = cfg.alpha_prime;
    if (cfg.kind == "constant") j["constant"] = cfg.constant;
    if (cfg.kind == "custom") j["custom_table"] = cfg.custom_table;
    j["root_tol"] = cfg.root_tol;
    j["depth"] = cfg.depth;
    j["cells"] = cfg.cells;
    j["ulam_steps"] = cfg.ulam_steps;
    j["nmax"] = cfg.nmax;
    j["samples"] = cfg.samples;
    j["grid"] = cfg.grid;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["suites"] = std::vector<std::string>(cfg.suites.begin(), cfg.suites.end());
    return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace gbt
