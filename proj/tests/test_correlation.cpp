#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gbt/correlation.hpp"
#include "gbt/errors.hpp"
#include "gbt/power_law.hpp"

using namespace gbt;
using Catch::Approx;

namespace {

const ExpandingMap& linear_map() {
    static const ExpandingMap M(CutFunction::linear());
    return M;
}

const UlamMatrix& linear_ulam() {
    static const UlamMatrix U = UlamMatrix::build(linear_map(), 1 << 12);
    return U;
}

}  // namespace

TEST_CASE("power-law fit of exact series", "[fit]") {
    std::vector<std::size_t> n;
    std::vector<double> inv;
    std::vector<double> half;
    std::vector<double> mixed;
    for (std::size_t k = 1; k <= 10000; ++k) {
        n.push_back(k);
        const double x = static_cast<double>(k);
        inv.push_back(1.0 / x);
        half.push_back(5.0 / std::sqrt(x));
        mixed.push_back(1.0 / x + 1.0 / (x * x));
    }
    const PowerLawFit a = fit_power_law(n, inv, 1, 10000);
    CHECK(std::abs(a.exponent + 1.0) <= 1e-10);
    CHECK(a.residual_rms <= 1e-10);
    CHECK_FALSE(a.poor_fit);
    const PowerLawFit b = fit_power_law(n, half, 1, 10000);
    CHECK(b.exponent == Approx(-0.5).margin(1e-10));
    CHECK(b.intercept == Approx(std::log(5.0)).margin(1e-10));
    const PowerLawFit c = fit_power_law(n, mixed, 100, 10000);
    CHECK(c.exponent > -1.05);
    CHECK(c.exponent < -1.0);
    CHECK(c.n_lo == 100);
    CHECK(c.n_hi == 10000);
}

TEST_CASE("power-law fit needs eight positive points", "[fit]") {
    std::vector<std::size_t> n{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> v(10, 1.0);
    CHECK_NOTHROW(fit_power_law(n, v, 1, 8));
    CHECK_THROWS_AS(fit_power_law(n, v, 1, 7), PreconditionError);
    v[3] = 0.0;
    CHECK_THROWS_AS(fit_power_law(n, v, 1, 8), PreconditionError);
}

TEST_CASE("power-law fit flags a poor fit", "[fit]") {
    std::vector<std::size_t> n;
    std::vector<double> v;
    for (std::size_t k = 1; k <= 100; ++k) {
        n.push_back(k);
        v.push_back(k % 2 ? 1.0 : 10.0);
    }
    CHECK(fit_power_law(n, v, 1, 100).poor_fit);
}

TEST_CASE("constant psi decorrelates", "[corr]") {
    const Fn1 id = observable_1d("id");
    const Fn1 one = observable_1d("one");
    for (double v : correlate_1d_ulam(linear_ulam(), id, one, 20).series.value) CHECK(v <= 1e-15);
    for (double v : correlate_1d_quadrature(linear_map(), id, one, 20, 4096).series.value) {
        CHECK(v <= 1e-15);
    }
}

TEST_CASE("variance at lag zero", "[corr]") {
    const Fn1 id = observable_1d("id");
    const auto q = correlate_1d_quadrature(linear_map(), id, id, 0, 100000);
    CHECK(q.series.value[0] == Approx(1.0 / 12.0).epsilon(1e-8));
    const auto u = correlate_1d_ulam(linear_ulam(), id, id, 0);
    CHECK(u.series.value[0] == Approx(1.0 / 12.0).epsilon(1e-6));
}

TEST_CASE("bilinearity and shift invariance", "[corr][invariant]") {
    const Fn1 id = observable_1d("id");
    const Fn1 scaled = [](double x) { return -3.0 * x; };
    const Fn1 shifted = [](double x) { return x + 7.0; };
    const auto base = correlate_1d_ulam(linear_ulam(), id, id, 30);
    const auto sc = correlate_1d_ulam(linear_ulam(), id, scaled, 30);
    const auto sh = correlate_1d_ulam(linear_ulam(), shifted, id, 30);
    for (std::size_t n = 0; n <= 30; ++n) {
        CHECK(sc.series.value[n] == Approx(3.0 * base.series.value[n]).epsilon(1e-12));
        CHECK(sh.series.value[n] == Approx(base.series.value[n]).epsilon(1e-9).margin(1e-15));
    }
    const auto qb = correlate_1d_quadrature(linear_map(), id, id, 10, 20000);
    const auto qs = correlate_1d_quadrature(linear_map(), id, scaled, 10, 20000);
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(qs.series.value[n] == Approx(3.0 * qb.series.value[n]).epsilon(1e-12));
    }
}

TEST_CASE("ulam and quadrature agree above their floors", "[corr][invariant]") {
    const Fn1 id = observable_1d("id");
    const auto u = correlate_1d_ulam(linear_ulam(), id, id, 200);
    const auto q = correlate_1d_quadrature(linear_map(), id, id, 200, 200000);
    const double floor = 10.0 / static_cast<double>(linear_ulam().n_cells());
    CHECK(method_disagreement(u.series, q.series, 1, 200, floor) <= 0.1);
}

TEST_CASE("correlate_1d dispatches on the method", "[corr]") {
    const Fn1 id = observable_1d("id");
    Correlate1DOptions opt;
    opt.method = Method1D::Ulam;
    opt.cells = 1 << 10;
    const auto u = correlate_1d(linear_map(), id, id, 5, opt);
    CHECK(u.series.method == "ulam");
    opt.method = Method1D::Quadrature;
    opt.grid = 1000;
    const auto q = correlate_1d(linear_map(), id, id, 5, opt);
    CHECK(q.series.method == "quadrature");
    CHECK(q.series.samples == 1000);
}

TEST_CASE("2-D correlation with constant psi is zero within error", "[corr][2d]") {
    const BakerMap B(linear_map());
    const auto c = correlate_2d(B, observable_2d("x"), observable_2d("one"), 10, 20000, 3);
    for (std::size_t n = 0; n <= 10; ++n) CHECK(c.series.value[n] <= 1e-15);
}

TEST_CASE("2-D correlation of x with x matches the 1-D one", "[corr][2d]") {
    const BakerMap B(linear_map());
    const auto two = correlate_2d(B, observable_2d("x"), observable_2d("x"), 20, 200000, 5);
    const Fn1 id = observable_1d("id");
    const auto one = correlate_1d_quadrature(linear_map(), id, id, 20, 200000);
    for (std::size_t n = 0; n <= 20; ++n) {
        const double se = std::hypot(two.series.stderr_[n], one.series.stderr_[n]);
        CHECK(std::abs(two.signed_value[n] - one.signed_value[n]) <= 4.0 * se);
    }
}

TEST_CASE("2-D correlation of x with y vanishes", "[corr][2d]") {
    // x o B^n depends on x alone and y is independent of x under m.
    const BakerMap B(linear_map());
    const auto c = correlate_2d(B, observable_2d("x"), observable_2d("y"), 10, 100000, 9);
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(std::abs(c.signed_value[n]) <= 4.0 * c.series.stderr_[n]);
    }
}

TEST_CASE("noise floor index", "[corr]") {
    DecaySeries s;
    s.push(0, 1.0, 0.1);
    s.push(1, 0.5, 0.1);
    s.push(2, 0.1, 0.1);
    CHECK(noise_floor_index(s) == 2);
    DecaySeries quiet;
    quiet.push(0, 1.0, 0.0);
    CHECK(noise_floor_index(quiet) == 1);
    DecaySeries zero_at_start;
    zero_at_start.push(0, 0.0, 0.1);
    zero_at_start.push(1, 0.5, 0.1);
    CHECK(noise_floor_index(zero_at_start) == 2);
}

TEST_CASE("fibre rule integrates polynomials", "[corr]") {
    const auto& rule = fibre_rule();
    CHECK(rule.size() == 256);
    double w = 0.0;
    double m5 = 0.0;
    for (const auto& [y, wt] : rule) {
        w += wt;
        m5 += wt * std::pow(y, 5);
        CHECK(y > 0.0);
        CHECK(y < 1.0);
    }
    CHECK(w == Approx(1.0).margin(1e-14));
    CHECK(m5 == Approx(1.0 / 6.0).margin(1e-14));
    CHECK(fibre_average(observable_2d("xy"), 0.4) == Approx(0.2).margin(1e-14));
}

TEST_CASE("projection identity for fibre-independent and fibre-mean observables", "[corr][2d]") {
    const BakerMap B(linear_map());
    const Fn1 id = observable_1d("id");
    const ProjectionReport x = projection_identity_check(B, id, observable_2d("x"), {1, 5}, 50000, 4, 50000);
    CHECK(x.max_ratio <= 3.0);
    const ProjectionReport y = projection_identity_check(B, id, observable_2d("y"), {1, 5}, 50000, 4, 50000);
    for (const auto& r : y.rows) {
        CHECK(std::abs(r.one_d) <= 1e-15);
        CHECK(r.discrepancy <= 3.0 * r.combined_se);
    }
    const ProjectionReport xy = projection_identity_check(B, id, observable_2d("xy"), {1, 5, 20}, 100000, 4, 100000);
    CHECK(xy.max_ratio <= 3.0);
    CHECK_THROWS_AS(projection_identity_check(B, id, observable_2d("x"), {}, 10), PreconditionError);
}

TEST_CASE("lower-bound chain on the linear cut", "[corr][lowerbound]") {
    const UlamMatrix& U = linear_ulam();
    const LowerBoundReport r = lower_bound_check(U, CutFunction::linear(), 2000);
    CHECK(r.cor.value[0] == Approx(1.0 / 12.0).margin(1e-6));
    CHECK(r.equality_holds);
    CHECK(r.inequality_holds);
    CHECK(r.slack == Approx(10.0 / 4096.0));
    const ExpandingMap A(CutFunction::asymmetric_power(1.0, 2.0));
    const UlamMatrix UA = UlamMatrix::build(A, 64);
    CHECK_THROWS_AS(lower_bound_check(UA, A.cut(), 10), PreconditionError);
}

TEST_CASE("observables by name", "[corr]") {
    CHECK(observable_1d("id")(0.3) == 0.3);
    CHECK(observable_1d("cos2pix")(0.5) == Approx(-1.0));
    CHECK(observable_2d("xy")(0.5, 0.4) == Approx(0.2));
    CHECK_THROWS_AS(observable_1d("tan"), PreconditionError);
    CHECK_THROWS_AS(observable_2d("z"), PreconditionError);
}
