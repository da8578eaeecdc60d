#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gbt/baker_map.hpp"
#include "gbt/correlation.hpp"
#include "gbt/errors.hpp"
#include "gbt/expanding_map.hpp"
#include "gbt/io.hpp"
#include "gbt/rng.hpp"
#include "gbt/tower.hpp"
#include "gbt/ulam.hpp"

namespace gbt {

namespace {

using Json = nlohmann::ordered_json;

class Report {
public:
    explicit Report(std::ostream& log) : log_(log) {}

    // |value - expected| <= tolerance
    void near(const std::string& name, double value, double expected, double tolerance) {
        add(name, std::abs(value - expected) <= tolerance, value, expected, tolerance);
    }
    // value <= bound
    void at_most(const std::string& name, double value, double bound) {
        add(name, value <= bound, value, 0.0, bound);
    }
    void flag(const std::string& name, bool pass, double value) { add(name, pass, value, 1.0, 0.0); }

    void exponent(const std::string& name, const PowerLawFit& fit, double expected) {
        Json j = to_json(fit);
        j["expected"] = expected;
        exponents_[name] = j;
    }
    void suite(const std::string& name, const std::string& status) {
        suites_.push_back({{"name", name}, {"status", status}});
    }

    bool passed() const { return failures_ == 0; }

    Json json(const ExperimentConfig& cfg, const CutFunction& cut) const {
        Json j;
        j["config"] = to_json(cfg);
        j["cut"] = to_json(cut);
        j["suites"] = suites_;
        j["checks"] = checks_;
        j["exponents"] = exponents_;
        j["pass"] = passed();
        return j;
    }

private:
    void add(const std::string& name, bool pass, double value, double expected, double tolerance) {
        Json c;
        c["name"] = name;
        c["pass"] = pass;
        c["value"] = std::isfinite(value) ? Json(value) : Json(format_real(value));
        c["expected"] = expected;
        c["tolerance"] = tolerance;
        checks_.push_back(c);
        if (!pass) ++failures_;
        log_ << (pass ? "PASS " : "FAIL ") << name << " value=" << format_real(value) << '\n';
    }

    std::ostream& log_;
    Json checks_ = Json::array();
    Json suites_ = Json::array();
    Json exponents_ = Json::object();
    int failures_ = 0;
};

double uniform(std::uint64_t seed, std::size_t i, std::uint32_t lane) {
    return counter_uniform(seed, i, lane);
}

void cut_suite(const CutFunction& cut, std::uint64_t seed, Report& R) {
    std::size_t order_violations = 0;
    double range = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
        double t1 = uniform(seed, i, 0);
        double t2 = uniform(seed, i, 1);
        if (t1 > t2) std::swap(t1, t2);
        if (cut.value(t1) < cut.value(t2)) ++order_violations;
        const double v = cut.value(t1);
        range = std::max({range, -v, v - 1.0});
    }
    R.at_most("cut.monotone", static_cast<double>(order_violations), 0.0);
    R.at_most("cut.range", std::max(range, 0.0), 0.0);
    R.near("cut.integral_at_zero", cut.integral(0.0), 0.0, 0.0);

    const double h = 1e-6;
    double ftc = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        const double t = 0.01 + 0.98 * uniform(seed, i, 2);
        if (std::abs(t - 0.5) < 1e-3) continue;
        const double fd = (cut.integral(t + h) - cut.integral(t - h)) / (2.0 * h);
        ftc = std::max(ftc, std::abs(fd - cut.value(t)));
    }
    R.at_most("cut.fundamental_theorem", ftc, 1e-6);

    if (cut.symmetric()) {
        double sym = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            const double t = uniform(seed, i, 3);
            sym = std::max(sym, std::abs(1.0 - cut.value(t) - cut.value(1.0 - t)));
        }
        R.at_most("cut.symmetry", sym, 1e-14);
        R.near("cut.half_area", cut.total_integral(), 0.5, 1e-14);
    }
}

void map_suite(const ExpandingMap& M, std::uint64_t seed, Report& R) {
    const auto& cut = M.cut();
    const double a = M.a();
    double identity = 0.0;
    double round_trip = 0.0;
    double min_df = INFINITY;
    for (std::size_t i = 0; i < 1000; ++i) {
        const double u = uniform(seed, i, 4);
        identity = std::max(identity, std::abs(cut.integral(u) + (M.inverse_right(u) - a) - u));
        // x = inverse(u) is rounded before f sees it, and f' amplifies that
        // rounding; the bound is 10 root_tol plus f'(x) ulp(x).
        for (const double x : {M.inverse_left(u), M.inverse_right(u)}) {
            double floor = 0.0;
            if (x > 0.0 && x != a) {
                const MapDerivative d = M.derivative(x);
                floor = d.infinite ? INFINITY : d.value * std::abs(x) * 0x1p-52;
            }
            const double err = std::abs(M.forward(x) - u);
            round_trip = std::max(round_trip, err / (10.0 * M.root_tol() + floor));
        }
        const double x = uniform(seed, i, 5);
        if (x > 0.0 && x != a) {
            const MapDerivative d = M.derivative(x);
            if (!d.infinite) min_df = std::min(min_df, d.value);
        }
    }
    R.at_most("map.measure_identity", identity, 1e-13);
    R.at_most("map.round_trip_scaled", round_trip, 1.0);
    R.flag("map.expansion", min_df >= 1.0 - 1e-12, min_df);

    if (cut.kind() == CutKind::Linear) {
        double err = 0.0;
        for (std::size_t i = 1; i < 1000; ++i) {
            const double x = static_cast<double>(i) / 1000.0;
            if (x == 0.5) continue;
            const double exact = x < 0.5 ? 1.0 - std::sqrt(1.0 - 2.0 * x) : std::sqrt(2.0 * x - 1.0);
            err = std::max(err, std::abs(M.forward(x) - exact));
        }
        R.at_most("map.closed_form", err, 10.0 * M.root_tol());
    }
}

void tower_suite(const ExpandingMap& M, const ExperimentConfig& cfg, Report& R) {
    const auto& cut = M.cut();
    const TowerPartition T = build_tower(M, cfg.depth);
    R.at_most("tower.period2",
              std::max(std::abs(M.forward(T.x0) - T.x0p), std::abs(M.forward(T.x0p) - T.x0)),
              M.root_tol());
    if (cut.kind() == CutKind::Linear) R.near("tower.x0", T.x0, std::sqrt(2.0) - 1.0, 10.0 * M.root_tol());
    bool ordered = true;
    for (std::size_t n = 0; n < T.depth; ++n) {
        ordered = ordered && T.xs[n + 1] < T.xs[n] && T.xps[n + 1] > T.xps[n];
    }
    R.flag("tower.monotone_sequences", ordered, static_cast<double>(T.depth));
    R.flag("tower.return_times_2_and_3", T.depth >= 2 && T.mI[1] > 0.0 && T.mI[2] > 0.0, T.mI[1]);

    if (T.depth < 200) {
        R.flag("tower.depth_for_fits", false, static_cast<double>(T.depth));
        return;
    }
    const bool guaranteed = cut.kind() != CutKind::Custom;
    const double tol = cut.kind() == CutKind::AsymmetricPower ? 0.07 : 0.05;
    const AsymptoticReport A = asymptotic_report(T, cut, 100, T.depth);
    for (const auto& s : A.slopes) {
        if (guaranteed) R.near("tower.slope." + s.name, s.fit.exponent, s.expected, tol);
        R.exponent(s.name, s.fit, s.expected);
    }

    const auto tail = tail_mass_series(T);
    std::vector<std::size_t> n(tail.size());
    for (std::size_t k = 0; k < n.size(); ++k) n[k] = k;
    const std::size_t hi = std::min<std::size_t>(10'000, tail.size() - 1);
    const PowerLawFit tf = fit_power_law(n, tail, 100, hi);
    const double expected = -1.0 / cut.gamma();
    if (guaranteed) R.near("tower.tail_mass_exponent", tf.exponent, expected, 0.1);
    R.exponent("tail", tf, expected);
}

void ulam_suite(const UlamMatrix& U, const CutFunction& cut, Report& R) {
    R.at_most("ulam.row_sums", U.row_sum_residual(), 1e-12);
    R.at_most("ulam.column_sums", U.column_sum_residual(), 1e-12);
    R.flag("ulam.nonnegative", U.min_entry() >= 0.0, U.min_entry());
    if (cut.symmetric() && U.n_cells() % 2 == 0) {
        const AntisymmetryReport A = antisymmetry_check(U, cut, 100);
        R.at_most("ulam.antisymmetry", A.antisymmetry, 1e-3);
        R.at_most("ulam.monotonicity", A.monotonicity, 1e-3);
    }
}

void decay_suite(const UlamMatrix& U, const CutFunction& cut, const ExperimentConfig& cfg, Report& R) {
    const double expected = -1.0 / cut.gamma();
    const DecaySeries tv = measure_decay(U, density_linear(U.n_cells()), cfg.ulam_steps);
    const FitWindow w = decay_fit_window(tv, U.n_cells());
    const PowerLawFit tf = fit_power_law(tv, w.lo, w.hi);
    R.near("decay.tv_exponent", tf.exponent, expected, 0.15);
    R.exponent("tv", tf, expected);

    const Fn1 id = observable_1d("id");
    const CorrelationSeries c = correlate_1d_ulam(U, id, id, cfg.ulam_steps);
    const FitWindow cw = decay_fit_window(c.series, U.n_cells());
    const PowerLawFit cf = fit_power_law(c.series, cw.lo, cw.hi);
    R.near("decay.corr1d_exponent", cf.exponent, expected, 0.15);
    R.exponent("corr1d", cf, expected);
}

void lower_bound_suite(const UlamMatrix& U, const CutFunction& cut, const ExperimentConfig& cfg,
                       Report& R) {
    const LowerBoundReport L = lower_bound_check(U, cut, cfg.ulam_steps);
    R.at_most("lowerbound.equality", L.max_equality_gap, L.slack);
    R.at_most("lowerbound.inequality", L.max_inequality_deficit, L.slack);
    R.near("lowerbound.exponent", L.fit.exponent, L.expected_exponent, 0.15);
    R.near("lowerbound.variance_at_zero", L.cor.value[0], 1.0 / 12.0, 10.0 / static_cast<double>(U.n_cells()));
    R.exponent("lowerbound", L.fit, L.expected_exponent);
}

void decay2d_suite(const ExpandingMap& M, const ExperimentConfig& cfg, Report& R) {
    const BakerMap B(M);
    const Fn2 x = observable_2d("x");
    const Fn2 y = observable_2d("y");
    const Fn2 xy = observable_2d("xy");
    const std::size_t n_max = cfg.nmax;
    const auto series = correlate_2d_multi(B, {{x, y}, {y, x}, {x, xy}}, n_max, cfg.samples, cfg.seed);
    const double expected = -1.0 / M.cut().gamma();

    auto fit2d = [](const DecaySeries& s) -> std::optional<PowerLawFit> {
        const std::size_t stop = noise_floor_index(s);
        if (stop < 9) return std::nullopt;
        try {
            return fit_power_law(s, 1, stop - 1);
        } catch (const PreconditionError&) {
            return std::nullopt;
        }
    };
    const auto f_xy = fit2d(series[0].series);
    R.near("decay2d.exponent(x,y)", f_xy ? f_xy->exponent : NAN, expected, 0.25);
    if (f_xy) R.exponent("decay2d(x,y)", *f_xy, expected);
    if (const auto f_yx = fit2d(series[1].series)) R.exponent("decay2d(y,x)", *f_yx, expected);

    std::vector<std::size_t> n_list;
    for (std::size_t n : {1, 5, 20, 100}) {
        if (n <= n_max) n_list.push_back(n);
    }
    if (n_list.empty()) return;
    const ProjectionReport P = projection_identity_check(M, series[2], observable_1d("id"), xy, n_list,
                                                          cfg.grid);
    R.at_most("decay2d.projection_identity_se", P.max_ratio, 3.0);
}

}  // namespace

int run_verify(const ExperimentConfig& cfg, std::ostream& log) {
    cfg.validate();
    set_threads(cfg.threads);
    const CutFunction cut = cfg.make_cut();
    const ExpandingMap M(cut, cfg.root_tol);
    Report R(log);

    if (cfg.suite("tower") && cut.is_constant()) {
        throw PreconditionError("tower requires non-constant cut");
    }
    if (cfg.suite("lowerbound") && !cut.symmetric()) {
        throw PreconditionError("lowerbound requires a symmetric cut");
    }
    if ((cfg.suite("decay") || cfg.suite("lowerbound") || cfg.suite("decay2d")) && cut.is_constant()) {
        throw PreconditionError("decay suites require a non-constant cut");
    }

    if (cfg.suite("cut")) {
        cut_suite(cut, cfg.seed, R);
        R.suite("cut", "ran");
    }
    if (cfg.suite("map")) {
        map_suite(M, cfg.seed, R);
        R.suite("map", "ran");
    }
    if (cfg.suite("tower")) {
        tower_suite(M, cfg, R);
        R.suite("tower", "ran");
    }
    std::optional<UlamMatrix> U;
    if (cfg.suite("ulam") || cfg.suite("decay") || cfg.suite("lowerbound")) {
        U = UlamMatrix::build(M, cfg.cells);
    }
    if (cfg.suite("ulam")) {
        ulam_suite(*U, cut, R);
        R.suite("ulam", "ran");
    }
    if (cfg.suite("decay")) {
        decay_suite(*U, cut, cfg, R);
        R.suite("decay", "ran");
    }
    if (cfg.suite("lowerbound")) {
        lower_bound_suite(*U, cut, cfg, R);
        R.suite("lowerbound", "ran");
    }
    if (cfg.suite("decay2d")) {
        decay2d_suite(M, cfg, R);
        R.suite("decay2d", "ran");
    }

    std::filesystem::create_directories(cfg.output_dir);
    const std::string path = (std::filesystem::path(cfg.output_dir) / "report.json").string();
    write_json(path, R.json(cfg, cut));
    log << (R.passed() ? "verify: all checks passed" : "verify: some checks failed") << " (" << path
        << ")\n";
    return R.passed() ? 0 : 1;
}

}  // namespace gbt
