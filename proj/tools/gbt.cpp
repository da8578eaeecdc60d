// gbt: command-line front end for the baker's transformation toolkit.
//
//     gbt eval --kind sympow --alpha 2 --x 0.2 --x 0.7
//     gbt tower --kind linear --depth 100000 --out results/
//     gbt verify --config experiment.cfg

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gbt/baker_map.hpp"
#include "gbt/config.hpp"
#include "gbt/correlation.hpp"
#include "gbt/errors.hpp"
#include "gbt/expanding_map.hpp"
#include "gbt/io.hpp"
#include "gbt/tower.hpp"
#include "gbt/ulam.hpp"
#include "verify.hpp"

using namespace gbt;
using Json = nlohmann::ordered_json;

namespace {

// Flags shared by every subcommand map onto config keys; explicit flags
// override values read from --config.
struct Overrides {
    std::string config_path;
    std::vector<std::pair<CLI::Option*, std::string*>> options;
    std::deque<std::string> storage;  // stable addresses for CLI11 bindings
    std::vector<std::string> keys;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        storage.emplace_back();
        std::string* slot = &storage.back();
        CLI::Option* opt = app->add_option(flag, *slot, help);
        options.push_back({opt, slot});
        keys.push_back(key);
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        for (std::size_t k = 0; k < options.size(); ++k) {
            if (options[k].first->count() > 0) cfg.set(keys[k], *options[k].second, 0);
        }
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "key = value experiment file")->check(CLI::ExistingFile);
    o.add(app, "--kind", "kind", "constant | linear | sympow | asympow | custom");
    o.add(app, "--alpha", "alpha", "exponent at 0");
    o.add(app, "--alpha-prime", "alpha_prime", "exponent at 1 (asympow)");
    o.add(app, "--constant", "constant", "value of a constant cut");
    o.add(app, "--custom-table", "custom_table", "t,phi CSV for kind = custom");
    o.add(app, "--root-tol", "root_tol", "implicit-solve tolerance");
    o.add(app, "--seed", "seed", "random seed");
    o.add(app, "--threads", "threads", "worker cap (0 = runtime default)");
    o.add(app, "--out", "output_dir", "directory for CSV and JSON output");
}

std::filesystem::path output_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return std::filesystem::path(cfg.output_dir) / name;
}

std::ofstream open_output(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

Json fit_json(const PowerLawFit& fit, double expected) {
    Json j = to_json(fit);
    j["expected"] = expected;
    return j;
}

int cmd_eval(const ExperimentConfig& cfg, std::vector<double> xs, const std::vector<double>& us) {
    const ExpandingMap M(cfg.make_cut(), cfg.root_tol);
    if (xs.empty() && us.empty()) {
        for (int i = 1; i < 10; ++i) xs.push_back(i / 10.0);
    }
    if (!xs.empty()) {
        CsvWriter csv(std::cout, {"x", "fx", "dfx"});
        for (double x : xs) {
            const double fx = M.forward(x);
            double dfx = NAN;
            if (x > 0.0 && x != M.a()) {
                const MapDerivative d = M.derivative(x);
                dfx = d.infinite ? INFINITY : d.value;
            }
            csv.row({x, fx, dfx});
        }
    }
    if (!us.empty()) {
        if (!xs.empty()) std::cout << '\n';
        CsvWriter csv(std::cout, {"u", "inverse_left", "inverse_right"});
        for (double u : us) csv.row({u, M.inverse_left(u), M.inverse_right(u)});
    }
    return 0;
}

int cmd_orbit2d(const ExperimentConfig& cfg, double x, double y, std::size_t steps) {
    const BakerMap B(ExpandingMap(cfg.make_cut(), cfg.root_tol));
    CsvWriter csv(std::cout, {"step", "x", "y", "contraction"});
    double contraction = 1.0;
    csv.row(0, {x, y, contraction});
    for (std::size_t k = 1; k <= steps; ++k) {
        double c = 1.0;
        const Point2 p = B.forward(x, y, c);
        contraction *= c;
        x = p.x;
        y = p.y;
        csv.row(k, {x, y, contraction});
    }
    return 0;
}

int cmd_tower(const ExperimentConfig& cfg) {
    const CutFunction cut = cfg.make_cut();
    const ExpandingMap M(cut, cfg.root_tol);
    const TowerPartition T = build_tower(M, cfg.depth);
    const auto tail = tail_mass_series(T);

    auto csv_out = open_output(output_path(cfg, "tower.csv"));
    CsvWriter csv(csv_out, {"n", "x_n", "xp_n", "mJ_n", "mJp_n", "mI_n", "mIp_n", "tail_mass_n"});
    for (std::size_t n = 0; n < T.depth; ++n) {
        csv.row(n, {T.xs[n], T.xps[n], T.mJ[n], T.mJp[n], T.mI[n], T.mIp[n], tail[n]});
    }

    Json j;
    j["cut"] = to_json(cut);
    j["x0"] = T.x0;
    j["x0p"] = T.x0p;
    j["a"] = T.a;
    j["depth"] = T.depth;
    j["requested_depth"] = T.requested_depth;
    j["truncated"] = T.truncated;
    if (T.depth >= 200) {
        Json slopes = Json::object();
        for (const auto& s : asymptotic_report(T, cut, 100, T.depth).slopes) {
            slopes[s.name] = fit_json(s.fit, s.expected);
        }
        j["slopes"] = slopes;
        std::vector<std::size_t> n(tail.size());
        for (std::size_t k = 0; k < n.size(); ++k) n[k] = k;
        const std::size_t hi = std::min<std::size_t>(10'000, tail.size() - 1);
        j["tail_mass"] = fit_json(fit_power_law(n, tail, 100, hi), -1.0 / cut.gamma());
    }
    write_json(output_path(cfg, "tower.json").string(), j);
    std::cout << "tower: depth " << T.depth << (T.truncated ? " (truncated)" : "") << ", x0 = "
              << format_real(T.x0) << ", x0' = " << format_real(T.x0p) << '\n';
    return 0;
}

std::vector<double> read_density(const std::string& spec, std::size_t n_cells) {
    if (spec == "uniform") return std::vector<double>(n_cells, 1.0);
    if (spec == "linear") return density_linear(n_cells);
    // x,density samples, linearly interpolated at the cell centres.
    std::ifstream in(spec);
    if (!in) throw ConfigError("density", 0, "field 'density': expected uniform, linear or a CSV path, got '" + spec + "'");
    std::vector<double> xs;
    std::vector<double> ds;
    std::string row;
    while (std::getline(in, row)) {
        const auto comma = row.find(',');
        if (row.empty() || comma == std::string::npos || std::isalpha(static_cast<unsigned char>(row[0]))) continue;
        xs.push_back(std::stod(row.substr(0, comma)));
        ds.push_back(std::stod(row.substr(comma + 1)));
    }
    if (xs.size() < 2 || !std::is_sorted(xs.begin(), xs.end())) {
        throw ConfigError("density", 0, "field 'density': need at least two rows sorted by x");
    }
    std::vector<double> out(n_cells);
    double mean = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n_cells);
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1);
        const double t = std::clamp((x - xs[k - 1]) / (xs[k] - xs[k - 1]), 0.0, 1.0);
        out[i] = ds[k - 1] + t * (ds[k] - ds[k - 1]);
        if (out[i] < 0.0) throw ConfigError("density", 0, "field 'density': negative density");
        mean += out[i];
    }
    mean /= static_cast<double>(n_cells);
    if (!(mean > 0.0)) throw ConfigError("density", 0, "field 'density': zero density");
    for (double& v : out) v /= mean;
    return out;
}

int cmd_ulam(const ExperimentConfig& cfg, const std::string& density) {
    const CutFunction cut = cfg.make_cut();
    const ExpandingMap M(cut, cfg.root_tol);
    const UlamMatrix U = UlamMatrix::build(M, cfg.cells);
    const DecaySeries tv = measure_decay(U, read_density(density, cfg.cells), cfg.ulam_steps);

    auto csv_out = open_output(output_path(cfg, "ulam.csv"));
    CsvWriter csv(csv_out, {"n", "tv_distance"});
    for (std::size_t k = 0; k < tv.size(); ++k) csv.row(tv.n[k], {tv.value[k]});

    Json j;
    j["cut"] = to_json(cut);
    j["cells"] = cfg.cells;
    j["steps"] = cfg.ulam_steps;
    j["density"] = density;
    j["row_sum_residual"] = U.row_sum_residual();
    j["column_sum_residual"] = U.column_sum_residual();
    j["max_row_nnz"] = U.max_row_nnz();
    const FitWindow w = decay_fit_window(tv, cfg.cells);
    j["window"] = {w.lo, w.hi};
    j["floor_reached"] = w.floor_reached;
    if (cut.is_constant()) {
        j["fit"] = nullptr;
    } else {
        try {
            j["fit"] = fit_json(fit_power_law(tv, w.lo, w.hi), -1.0 / cut.gamma());
        } catch (const PreconditionError& e) {
            j["fit"] = nullptr;
            j["fit_error"] = e.what();
        }
    }
    write_json(output_path(cfg, "ulam.json").string(), j);
    std::cout << "ulam: " << cfg.cells << " cells, row residual "
              << format_real(U.row_sum_residual()) << ", column residual "
              << format_real(U.column_sum_residual()) << '\n';
    return 0;
}

void write_corr_csv(const ExperimentConfig& cfg, const std::string& name, const DecaySeries& s) {
    auto out = open_output(output_path(cfg, name));
    CsvWriter csv(out, {"n", "corr", "stderr"});
    for (std::size_t k = 0; k < s.size(); ++k) {
        csv.row(s.n[k], {s.value[k], s.stderr_.empty() ? 0.0 : s.stderr_[k]});
    }
}

Json try_fit(const DecaySeries& s, std::size_t lo, std::size_t hi, double expected) {
    try {
        return fit_json(fit_power_law(s, lo, hi), expected);
    } catch (const PreconditionError& e) {
        return Json{{"error", e.what()}};
    }
}

int cmd_decay1d(const ExperimentConfig& cfg, const std::string& method, const std::string& phi,
                const std::string& psi) {
    const CutFunction cut = cfg.make_cut();
    if (cut.is_constant()) throw PreconditionError("decay1d requires a non-constant cut");
    const ExpandingMap M(cut, cfg.root_tol);
    const Fn1 f = observable_1d(phi);
    const Fn1 g = observable_1d(psi);
    const double expected = -1.0 / cut.gamma();

    Json j;
    j["cut"] = to_json(cut);
    j["phi"] = phi;
    j["psi"] = psi;
    j["nmax"] = cfg.nmax;
    std::optional<CorrelationSeries> quad;
    std::optional<CorrelationSeries> ulam;
    if (method == "quadrature" || method == "both") {
        quad = correlate_1d_quadrature(M, f, g, cfg.nmax, cfg.grid);
        write_corr_csv(cfg, "decay1d.csv", quad->series);
        const std::size_t stop = noise_floor_index(quad->series);
        j["quadrature"] = {{"grid", cfg.grid},
                           {"noise_floor_n", stop},
                           {"fit", try_fit(quad->series, 10, stop == 0 ? 0 : stop - 1, expected)}};
    }
    if (method == "ulam" || method == "both") {
        const UlamMatrix U = UlamMatrix::build(M, cfg.cells);
        ulam = correlate_1d_ulam(U, f, g, cfg.nmax);
        write_corr_csv(cfg, method == "both" ? "decay1d_ulam.csv" : "decay1d.csv", ulam->series);
        const FitWindow w = decay_fit_window(ulam->series, cfg.cells);
        j["ulam"] = {{"cells", cfg.cells},
                     {"window", {w.lo, w.hi}},
                     {"fit", try_fit(ulam->series, w.lo, w.hi, expected)}};
    }
    if (quad && ulam) {
        const FitWindow w = decay_fit_window(ulam->series, cfg.cells);
        const double d = method_disagreement(quad->series, ulam->series, w.lo, w.hi,
                                             10.0 / static_cast<double>(cfg.cells));
        j["method_disagreement"] = d;
        if (d > 0.1) std::cerr << "warning: ulam and quadrature disagree by " << d << '\n';
    }
    write_json(output_path(cfg, "decay1d.json").string(), j);
    std::cout << "decay1d: wrote " << output_path(cfg, "decay1d.csv").string() << '\n';
    return 0;
}

int cmd_decay2d(const ExperimentConfig& cfg, const std::string& phi, const std::string& psi) {
    const CutFunction cut = cfg.make_cut();
    if (cut.is_constant()) throw PreconditionError("decay2d requires a non-constant cut");
    const BakerMap B(ExpandingMap(cut, cfg.root_tol));
    const CorrelationSeries c =
        correlate_2d(B, observable_2d(phi), observable_2d(psi), cfg.nmax, cfg.samples, cfg.seed);
    write_corr_csv(cfg, "decay2d.csv", c.series);

    std::vector<std::size_t> noisy;
    for (std::size_t k = 0; k < c.series.size(); ++k) {
        if (c.series.stderr_[k] > 0.5 * c.series.value[k]) noisy.push_back(c.series.n[k]);
    }
    const std::size_t stop = noise_floor_index(c.series);
    Json j;
    j["cut"] = to_json(cut);
    j["phi"] = phi;
    j["psi"] = psi;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["nmax"] = cfg.nmax;
    j["noise_floor_n"] = stop;
    j["noise_flagged_n"] = noisy;
    j["fit"] = try_fit(c.series, 1, stop == 0 ? 0 : stop - 1, -1.0 / cut.gamma());
    write_json(output_path(cfg, "decay2d.json").string(), j);
    std::cout << "decay2d: noise floor at n = " << stop << '\n';
    return 0;
}

int cmd_lowerbound(const ExperimentConfig& cfg) {
    const CutFunction cut = cfg.make_cut();
    if (cut.is_constant()) throw PreconditionError("lowerbound requires a non-constant cut");
    const ExpandingMap M(cut, cfg.root_tol);
    const UlamMatrix U = UlamMatrix::build(M, cfg.cells);
    const LowerBoundReport L = lower_bound_check(U, cut, cfg.nmax);

    auto out = open_output(output_path(cfg, "lowerbound.csv"));
    CsvWriter csv(out, {"n", "integral", "bound", "corr"});
    for (std::size_t k = 0; k < L.cor.size(); ++k) {
        csv.row(L.cor.n[k], {L.integral.value[k], L.bound.value[k], L.cor.value[k]});
    }
    Json j;
    j["cut"] = to_json(cut);
    j["cells"] = cfg.cells;
    j["nmax"] = cfg.nmax;
    j["window"] = {L.window.lo, L.window.hi};
    j["slack"] = L.slack;
    j["max_equality_gap"] = L.max_equality_gap;
    j["max_inequality_deficit"] = L.max_inequality_deficit;
    j["equality_holds"] = L.equality_holds;
    j["inequality_holds"] = L.inequality_holds;
    j["fit"] = fit_json(L.fit, L.expected_exponent);
    write_json(output_path(cfg, "lowerbound.json").string(), j);
    const bool ok = L.equality_holds && L.inequality_holds;
    std::cout << "lowerbound: exponent " << format_real(L.fit.exponent) << ", equality "
              << (L.equality_holds ? "holds" : "fails") << ", inequality "
              << (L.inequality_holds ? "holds" : "fails") << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized baker's transformation toolkit"};
    app.require_subcommand(1);

    Overrides o;

    auto* eval = app.add_subcommand("eval", "f(x), f'(x) and branch inverses");
    std::vector<double> xs;
    std::vector<double> us;
    eval->add_option("--x", xs, "points for f and f'");
    eval->add_option("--u", us, "points for the branch inverses");

    auto* orbit = app.add_subcommand("orbit2d", "orbit of the 2-D map");
    double ox = 0.3;
    double oy = 0.5;
    std::size_t osteps = 20;
    orbit->add_option("--x", ox, "initial x")->check(CLI::Range(0.0, 1.0));
    orbit->add_option("--y", oy, "initial y")->check(CLI::Range(0.0, 1.0));
    orbit->add_option("--steps", osteps, "number of steps");

    auto* tower = app.add_subcommand("tower", "tower levels, tail masses and slope fits");
    o.add(tower, "--depth", "depth", "number of levels");

    auto* ulam = app.add_subcommand("ulam", "transfer-operator measure decay");
    std::string density = "linear";
    o.add(ulam, "--cells", "cells", "number of cells");
    o.add(ulam, "--steps", "ulam_steps", "operator steps");
    ulam->add_option("--density", density, "uniform | linear | path to x,density CSV");

    auto* d1 = app.add_subcommand("decay1d", "correlation decay of f");
    std::string method = "quadrature";
    std::string phi1 = "id";
    std::string psi1 = "id";
    o.add(d1, "--nmax", "nmax", "largest lag");
    o.add(d1, "--cells", "cells", "Ulam cells (method ulam)");
    o.add(d1, "--grid", "grid", "quadrature grid size");
    d1->add_option("--method", method, "quadrature | ulam | both")
        ->check(CLI::IsMember({"quadrature", "ulam", "both"}));
    d1->add_option("--phi", phi1, "observable: id | cos2pix | one");
    d1->add_option("--psi", psi1, "observable: id | cos2pix | one");

    auto* d2 = app.add_subcommand("decay2d", "Monte Carlo correlation decay of the 2-D map");
    std::string phi2 = "x";
    std::string psi2 = "y";
    o.add(d2, "--nmax", "nmax", "largest lag");
    o.add(d2, "--samples", "samples", "Monte Carlo samples");
    d2->add_option("--phi", phi2, "observable: x | y | xy | cos2pix | one");
    d2->add_option("--psi", psi2, "observable: x | y | xy | cos2pix | one");

    auto* lb = app.add_subcommand("lowerbound", "lower-bound chain for symmetric cuts");
    o.add(lb, "--nmax", "nmax", "largest lag");
    o.add(lb, "--cells", "cells", "number of cells");

    auto* verify = app.add_subcommand("verify", "run the configured check suites");
    o.add(verify, "--depth", "depth", "tower depth");
    o.add(verify, "--cells", "cells", "Ulam cells");
    o.add(verify, "--steps", "ulam_steps", "operator steps");
    o.add(verify, "--nmax", "nmax", "largest 2-D lag");
    o.add(verify, "--samples", "samples", "Monte Carlo samples");
    o.add(verify, "--grid", "grid", "quadrature grid size");
    o.add(verify, "--suites", "suites", "subset of cut map tower ulam decay lowerbound decay2d");

    for (auto* sub : {eval, orbit, tower, ulam, d1, d2, lb, verify}) add_common(sub, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const ExperimentConfig cfg = o.resolve();
        set_threads(cfg.threads);
        if (*eval) return cmd_eval(cfg, xs, us);
        if (*orbit) return cmd_orbit2d(cfg, ox, oy, osteps);
        if (*tower) return cmd_tower(cfg);
        if (*ulam) return cmd_ulam(cfg, density);
        if (*d1) return cmd_decay1d(cfg, method, phi1, psi1);
        if (*d2) return cmd_decay2d(cfg, phi2, psi2);
        if (*lb) return cmd_lowerbound(cfg);
        if (*verify) return run_verify(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
