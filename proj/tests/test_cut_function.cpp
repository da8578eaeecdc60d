#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gbt/cut_function.hpp"
#include "gbt/errors.hpp"
#include "gbt/rng.hpp"
#include "oracle_values.hpp"

using namespace gbt;
using Catch::Approx;

namespace {

std::vector<CutFunction> built_in_kinds() {
    return {CutFunction::constant(0.5), CutFunction::linear(), CutFunction::symmetric_power(2.0),
            CutFunction::symmetric_power(0.5), CutFunction::symmetric_power(1.5),
            CutFunction::asymmetric_power(1.0, 2.0), CutFunction::asymmetric_power(3.0, 0.7)};
}

}  // namespace

TEST_CASE("phi at documented points", "[cut]") {
    CHECK(CutFunction::linear().value(0.25) == 0.75);
    CHECK(CutFunction::symmetric_power(1.0).value(0.25) == 0.75);
    CHECK(CutFunction::symmetric_power(2.0).value(0.5) == 0.5);
    for (double t : {0.0, 0.3, 0.9, 1.0}) CHECK(CutFunction::constant(0.5).value(t) == 0.5);
    CHECK(CutFunction::asymmetric_power(1.0, 2.0).value(0.75) == Approx(0.125).epsilon(1e-15));
}

TEST_CASE("Phi at documented points", "[cut]") {
    CHECK(CutFunction::linear().integral(1.0) == 0.5);
    for (double a : {0.5, 1.0, 2.0, 3.5}) {
        CHECK(CutFunction::symmetric_power(a).integral(1.0) == Approx(0.5).margin(1e-15));
    }
    CHECK(CutFunction::linear().integral(0.585786) ==
          Approx(oracle::kLinearPhi0p585786).margin(1e-12));
    CHECK(CutFunction::constant(0.5).integral(0.6) == Approx(0.3).margin(1e-16));
    CHECK(CutFunction::asymmetric_power(1.0, 2.0).total_integral() ==
          Approx(oracle::kAsym12A).margin(1e-15));
}

TEST_CASE("phi prime at documented points", "[cut]") {
    CHECK(CutFunction::linear().derivative(0.3).value == -1.0);
    CHECK(CutFunction::symmetric_power(2.0).derivative(0.25).value == Approx(-1.0));
    CHECK(CutFunction::constant(0.5).derivative(0.4).value == 0.0);
}

TEST_CASE("phi prime flags the junction of unequal exponents", "[cut]") {
    const auto d = CutFunction::asymmetric_power(1.0, 2.0).derivative(0.5);
    CHECK(d.one_sided);
    CHECK(d.value == Approx(-1.0));
    CHECK_FALSE(CutFunction::symmetric_power(2.0).derivative(0.5).one_sided);
}

TEST_CASE("phi prime diverges at endpoints for exponents below one", "[cut]") {
    CHECK_THROWS_AS(CutFunction::symmetric_power(0.5).derivative(0.0), DomainError);
    CHECK_THROWS_AS(CutFunction::asymmetric_power(2.0, 0.5).derivative(1.0), DomainError);
    CHECK_NOTHROW(CutFunction::asymmetric_power(0.5, 2.0).derivative(1.0));
}

TEST_CASE("arguments outside the unit interval are rejected", "[cut]") {
    const auto f = CutFunction::linear();
    CHECK_THROWS_AS(f.value(-1e-9), DomainError);
    CHECK_THROWS_AS(f.value(1.0 + 1e-9), DomainError);
    CHECK_THROWS_AS(f.integral(1.5), DomainError);
    CHECK_THROWS_AS(f.value(NAN), DomainError);
}

TEST_CASE("invalid parameters are rejected", "[cut]") {
    CHECK_THROWS_AS(CutFunction::symmetric_power(0.0), PreconditionError);
    CHECK_THROWS_AS(CutFunction::asymmetric_power(1.0, -2.0), PreconditionError);
    CHECK_THROWS_AS(CutFunction::constant(1.0), PreconditionError);
    CHECK_THROWS_AS(make_cut("spline", 1.0, 1.0), PreconditionError);
}

TEST_CASE("asymmetric family reduces to the symmetric ones", "[cut]") {
    const auto lin = CutFunction::linear();
    const auto a11 = make_asymmetric_power(1.0, 1.0);
    const auto s3 = CutFunction::symmetric_power(3.0);
    const auto a33 = make_asymmetric_power(3.0, 3.0);
    for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        CHECK(a11.value(t) == lin.value(t));
        CHECK(a11.integral(t) == lin.integral(t));
        CHECK(a33.value(t) == s3.value(t));
    }
    CHECK(a33.symmetric());
    CHECK_FALSE(make_asymmetric_power(1.0, 2.0).symmetric());
}

TEST_CASE("phi is monotone and within [0,1]", "[cut][invariant]") {
    for (const auto& f : built_in_kinds()) {
        for (std::uint64_t i = 0; i < 1000; ++i) {
            double t1 = counter_uniform(1, i, 0);
            double t2 = counter_uniform(1, i, 1);
            if (t1 > t2) std::swap(t1, t2);
            CHECK(f.value(t1) >= f.value(t2));
            CHECK(f.value(t1) >= 0.0);
            CHECK(f.value(t1) <= 1.0);
        }
    }
}

TEST_CASE("non-constant kinds run from 1 to 0", "[cut][invariant]") {
    for (const auto& f : built_in_kinds()) {
        if (f.is_constant()) continue;
        CHECK(f.value(0.0) == 1.0);
        CHECK(f.value(1.0) == 0.0);
        CHECK(f.integral(0.0) == 0.0);
    }
}

TEST_CASE("Phi differentiates to phi", "[cut][invariant]") {
    const double h = 1e-6;
    for (const auto& f : built_in_kinds()) {
        for (std::uint64_t i = 0; i < 100; ++i) {
            const double t = 0.01 + 0.98 * counter_uniform(2, i, 0);
            if (std::abs(t - 0.5) < 1e-3) continue;
            const double fd = (f.integral(t + h) - f.integral(t - h)) / (2.0 * h);
            CHECK(std::abs(fd - f.value(t)) <= 1e-6);
        }
    }
}

TEST_CASE("symmetric kinds satisfy the reflection identity", "[cut][invariant]") {
    for (const auto& f : built_in_kinds()) {
        if (!f.symmetric()) continue;
        for (std::uint64_t i = 0; i < 1000; ++i) {
            const double t = counter_uniform(3, i, 0);
            CHECK(std::abs(1.0 - f.value(t) - f.value(1.0 - t)) <= 1e-14);
        }
        CHECK(std::abs(f.total_integral() - 0.5) <= 1e-14);
    }
}

TEST_CASE("boundary order of the symmetric power family", "[cut][invariant]") {
    for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
        const auto f = CutFunction::symmetric_power(alpha);
        for (double t : {1e-3, 1e-4, 1e-5}) {
            const double ratio = (1.0 - f.value(t)) / std::pow(t, alpha);
            CHECK(std::abs(ratio / std::exp2(alpha - 1.0) - 1.0) <= 1e-2);
        }
    }
}

TEST_CASE("gap and tail integrals match Phi", "[cut]") {
    for (const auto& f : built_in_kinds()) {
        for (int k = 0; k <= 50; ++k) {
            const double u = k / 50.0;
            CHECK(f.gap_integral(u) == Approx(u - f.integral(u)).margin(1e-15));
            CHECK(f.tail_integral(u) ==
                  Approx(f.total_integral() - f.integral(1.0 - u)).margin(1e-15));
        }
    }
}

TEST_CASE("gap integral keeps relative accuracy near zero", "[cut]") {
    const auto f = CutFunction::symmetric_power(2.0);
    // G(u) = (2/3) u^3 exactly
    CHECK(f.gap_integral(1e-7) == Approx(2.0 / 3.0 * 1e-21).epsilon(1e-14));
    CHECK(f.tail_integral(1e-7) == Approx(2.0 / 3.0 * 1e-21).epsilon(1e-14));
}

TEST_CASE("custom table reproduces a tabulated power cut", "[cut][custom]") {
    const auto ref = CutFunction::symmetric_power(2.0);
    std::vector<double> t;
    std::vector<double> v;
    for (int k = 0; k <= 400; ++k) {
        t.push_back(k / 400.0);
        v.push_back(ref.value(k / 400.0));
    }
    const auto f = CutFunction::custom(t, v, 2.0, 2.0);
    CHECK(f.kind() == CutKind::Custom);
    CHECK(f.total_integral() == Approx(0.5).margin(1e-6));
    for (int k = 1; k < 100; ++k) {
        const double x = k / 100.0;
        CHECK(f.value(x) == Approx(ref.value(x)).margin(1e-5));
        CHECK(f.integral(x) == Approx(ref.integral(x)).margin(1e-6));
    }
}

TEST_CASE("custom table validates its input", "[cut][custom]") {
    CHECK_THROWS_AS(CutFunction::custom({0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}, 1, 1), PreconditionError);
    CHECK_THROWS_AS(CutFunction::custom({0.0, 0.3, 0.6, 0.9}, {1.0, 0.6, 0.3, 0.0}, 1, 1),
                    PreconditionError);
    CHECK_THROWS_AS(CutFunction::custom({0.0, 0.3, 0.6, 1.0}, {1.0, 0.6, 0.7, 0.0}, 1, 1),
                    PreconditionError);
}

TEST_CASE("make_cut maps kind names", "[cut]") {
    CHECK(make_cut("linear", 5.0, 5.0).kind() == CutKind::Linear);
    CHECK(make_cut("sympow", 2.0, 2.0).alpha() == 2.0);
    const auto a = make_cut("asympow", 1.0, 2.0);
    CHECK(a.alpha_prime() == 2.0);
    CHECK(a.gamma() == 2.0);
    CHECK(make_cut("constant", 1.0, 1.0, 0.25).value(0.4) == 0.25);
    CHECK(a.label() == "asympow(1,2)");
}
