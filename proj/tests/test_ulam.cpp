#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "gbt/errors.hpp"
#include "gbt/ulam.hpp"

using namespace gbt;
using Catch::Approx;

namespace {

const UlamMatrix& linear_ulam(std::size_t cells) {
    static const ExpandingMap M(CutFunction::linear());
    static std::vector<std::pair<std::size_t, UlamMatrix>> cache;
    for (const auto& [n, U] : cache) {
        if (n == cells) return U;
    }
    cache.reserve(8);
    cache.emplace_back(cells, UlamMatrix::build(M, cells));
    return cache.back().second;
}

double dense_entry(const Csr& A, std::size_t r, std::size_t c) {
    for (std::size_t k = A.ptr[r]; k < A.ptr[r + 1]; ++k) {
        if (A.idx[k] == c) return A.val[k];
    }
    return 0.0;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("doubling map on four cells", "[ulam]") {
    const UlamMatrix U = UlamMatrix::build(ExpandingMap(CutFunction::constant(0.5)), 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const bool hit = j == (2 * i) % 4 || j == (2 * i + 1) % 4;
            CHECK(dense_entry(U.P(), i, j) == (hit ? 0.5 : 0.0));
        }
    }
}

TEST_CASE("build preconditions", "[ulam]") {
    const ExpandingMap M(CutFunction::linear());
    CHECK_THROWS_AS(UlamMatrix::build(M, 1), PreconditionError);
    CHECK_THROWS_AS(UlamMatrix::build(M, kMaxUlamCells + 1), PreconditionError);
    CHECK_THROWS_AS(UlamMatrix::build(ExpandingMap(CutFunction::constant(0.3)), 8), PreconditionError);
}

TEST_CASE("doubly stochastic at several resolutions", "[ulam][invariant]") {
    for (const auto& cut : {CutFunction::linear(), CutFunction::symmetric_power(2.0)}) {
        const ExpandingMap M(cut);
        for (std::size_t cells : {std::size_t{1} << 10, std::size_t{1} << 12, std::size_t{1} << 14}) {
            const UlamMatrix U = UlamMatrix::build(M, cells);
            CHECK(U.row_sum_residual() <= 1e-12);
            CHECK(U.column_sum_residual() <= 1e-12);
            CHECK(U.min_entry() >= 0.0);
        }
    }
}

TEST_CASE("columns stay narrow", "[ulam][invariant]") {
    // Column j of P collects the cells meeting f^-1 E_j; each branch
    // preimage of E_j is short, so columns stay narrow even where rows are
    // wide next to the cut.
    const UlamMatrix& U = linear_ulam(1 << 12);
    std::size_t widest = 0;
    for (std::size_t c = 0; c < U.n_cells(); ++c) widest = std::max(widest, U.PT().ptr[c + 1] - U.PT().ptr[c]);
    CHECK(widest <= 8);
    CHECK(U.P().nnz() == U.PT().nnz());
    CHECK(U.max_row_nnz() >= 2);
}

TEST_CASE("push on constant and zero steps", "[ulam]") {
    const UlamMatrix& U = linear_ulam(1 << 12);
    const std::vector<double> one(U.n_cells(), 1.0);
    const auto pushed = U.push(one, 50);
    for (double v : pushed) CHECK(v == Approx(1.0).margin(1e-12));
    std::vector<double> psi(U.n_cells());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::sin(0.01 * static_cast<double>(i));
    CHECK(U.push(psi, 0) == psi);
}

TEST_CASE("mean and positivity are preserved", "[ulam][invariant]") {
    const UlamMatrix& U = linear_ulam(1 << 12);
    std::vector<double> psi(U.n_cells());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = 1.0 + std::cos(0.003 * static_cast<double>(i * i));
    const double m0 = mean(psi);
    std::vector<double> v = psi;
    std::vector<double> next(v.size());
    for (std::size_t n = 1; n <= 200; ++n) {
        U.transfer(v.data(), next.data());
        v.swap(next);
        CHECK(std::abs(mean(v) - m0) <= 1e-10 * static_cast<double>(n));
        CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
    }
}

TEST_CASE("measure decay of Lebesgue is zero", "[ulam]") {
    const UlamMatrix& U = linear_ulam(1 << 12);
    const DecaySeries d = measure_decay(U, std::vector<double>(U.n_cells(), 1.0), 30);
    for (double v : d.value) CHECK(v <= 1e-13);
    CHECK_THROWS_AS(measure_decay(U, std::vector<double>(5, 1.0), 3), PreconditionError);
}

TEST_CASE("density 2x has mean one", "[ulam]") {
    CHECK(mean(density_linear(1 << 10)) == Approx(1.0).margin(1e-15));
    const UlamMatrix& U = linear_ulam(1 << 12);
    const DecaySeries d = measure_decay(U, density_linear(U.n_cells()), 0);
    // int |2x - 1| dx = 1/2
    CHECK(d.value[0] == Approx(0.5).margin(1e-6));
}

TEST_CASE("measure decay exponent of the linear cut", "[ulam]") {
    const UlamMatrix& U = linear_ulam(1 << 14);
    const DecaySeries d = measure_decay(U, density_linear(U.n_cells()), 20000);
    const FitWindow w = decay_fit_window(d, U.n_cells());
    CHECK(w.floor_reached);
    CHECK(w.lo == 10);
    CHECK(w.hi > 1000);
    CHECK(fit_power_law(d, w.lo, w.hi).exponent == Approx(-1.0).margin(0.15));
}

TEST_CASE("refinement consistency over the fit window", "[ulam][invariant]") {
    const UlamMatrix& coarse = linear_ulam(1 << 13);
    const UlamMatrix& fine = linear_ulam(1 << 14);
    const DecaySeries dc = measure_decay(coarse, density_linear(coarse.n_cells()), 4000);
    const DecaySeries df = measure_decay(fine, density_linear(fine.n_cells()), 4000);
    const FitWindow w = decay_fit_window(dc, coarse.n_cells());
    double worst = 0.0;
    for (std::size_t n = w.lo; n <= w.hi && n < dc.size(); ++n) {
        worst = std::max(worst, std::abs(dc.value[n] - df.value[n]) / df.value[n]);
    }
    CHECK(worst <= 0.05);
}

TEST_CASE("antisymmetry at step zero is exact", "[ulam]") {
    const UlamMatrix& U = linear_ulam(1 << 12);
    const AntisymmetryReport r = antisymmetry_check(U, CutFunction::linear(), 0);
    CHECK(r.antisymmetry == 0.0);
    CHECK(r.monotonicity == 0.0);
}

TEST_CASE("antisymmetry and monotonicity are preserved", "[ulam][invariant]") {
    const UlamMatrix& U = linear_ulam(1 << 14);
    const AntisymmetryReport r = antisymmetry_check(U, CutFunction::linear(), 100);
    CHECK(r.antisymmetry <= 1e-3);
    CHECK(r.monotonicity <= 1e-3);
    CHECK(r.antisymmetry_by_step.size() == 101);
}

TEST_CASE("antisymmetry check rejects asymmetric cuts and odd grids", "[ulam]") {
    const ExpandingMap M(CutFunction::asymmetric_power(1.0, 2.0));
    const UlamMatrix U = UlamMatrix::build(M, 64);
    CHECK_THROWS_AS(antisymmetry_check(U, M.cut(), 3), PreconditionError);
    const UlamMatrix odd = UlamMatrix::build(ExpandingMap(CutFunction::linear()), 63);
    CHECK_THROWS_AS(antisymmetry_check(odd, CutFunction::linear(), 3), PreconditionError);
}

TEST_CASE("doubling map smears a cell vector quickly", "[ulam]") {
    const std::size_t cells = 1 << 10;
    const UlamMatrix U = UlamMatrix::build(ExpandingMap(CutFunction::constant(0.5)), cells);
    const AntisymmetryReport r = antisymmetry_check(U, CutFunction::constant(0.5), 12);
    CHECK(r.antisymmetry == 0.0);
    std::vector<double> v(cells);
    for (std::size_t i = 0; i < cells; ++i) v[i] = 0.5 - (static_cast<double>(i) + 0.5) / cells;
    const auto pushed = U.push(v, 11);
    double amp = 0.0;
    for (double x : pushed) amp = std::max(amp, std::abs(x));
    CHECK(amp <= 1e-3);
}

TEST_CASE("transfer and koopman are adjoint", "[ulam]") {
    const UlamMatrix& U = linear_ulam(1 << 10);
    const std::size_t n = U.n_cells();
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = std::sin(0.1 * static_cast<double>(i));
        b[i] = std::cos(0.07 * static_cast<double>(i));
    }
    std::vector<double> La(n);
    std::vector<double> Kb(n);
    U.transfer(a.data(), La.data());
    U.koopman(b.data(), Kb.data());
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lhs += b[i] * La[i];
        rhs += Kb[i] * a[i];
    }
    CHECK(lhs == Approx(rhs).epsilon(1e-12));
}
