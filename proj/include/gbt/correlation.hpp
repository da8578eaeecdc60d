#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gbt/baker_map.hpp"
#include "gbt/kernels.hpp"
#include "gbt/power_law.hpp"
#include "gbt/rng.hpp"
#include "gbt/ulam.hpp"

namespace gbt {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Test observables on [0,1]: "id", "cos2pix", "one".
Fn1 observable_1d(const std::string& name);
/// Test observables on the square: "x", "y", "xy", "cos2pix", "one".
Fn2 observable_2d(const std::string& name);

/// Correlations with their signed estimates kept alongside |Cor_n|.
struct CorrelationSeries {
    DecaySeries series;        // |Cor_n| with standard errors when sampled
    std::vector<double> signed_value;
};

/// Cor_n = |int phi (L^n psi~) dm| on the cell grid, psi~ the centred psi.
CorrelationSeries correlate_1d_ulam(const UlamMatrix& U, const Fn1& phi, const Fn1& psi,
                                    std::size_t n_max, Backend backend = Backend::Parallel);

inline constexpr std::size_t kDefaultGrid = 1'000'000;

/// Orbits of the midpoint grid x_k = (k + 1/2)/grid; Lebesgue measure is
/// invariant so the grid average is an exact-measure quadrature.
CorrelationSeries correlate_1d_quadrature(const ExpandingMap& M, const Fn1& phi, const Fn1& psi,
                                          std::size_t n_max, std::size_t grid = kDefaultGrid,
                                          Backend backend = Backend::Parallel);

enum class Method1D { Ulam, Quadrature };

struct Correlate1DOptions {
    Method1D method = Method1D::Quadrature;
    std::size_t grid = kDefaultGrid;
    std::size_t cells = std::size_t{1} << 14;
    Backend backend = Backend::Parallel;
};

CorrelationSeries correlate_1d(const ExpandingMap& M, const Fn1& phi, const Fn1& psi,
                               std::size_t n_max, const Correlate1DOptions& opt = {});

/// Largest relative disagreement between two 1-D estimates over n in
/// [n_lo, n_hi] where both exceed `floor`; above 0.1 the methods disagree.
double method_disagreement(const DecaySeries& a, const DecaySeries& b, std::size_t n_lo,
                           std::size_t n_hi, double floor);

/// Monte Carlo Cor_n for several (phi_k, psi_k) pairs sharing one set of
/// orbits z_i -> B^n z_i, with z_i drawn from the counter generator.
std::vector<CorrelationSeries> correlate_2d_multi(const BakerMap& B,
                                                  const std::vector<std::pair<Fn2, Fn2>>& pairs,
                                                  std::size_t n_max, std::size_t n_samples,
                                                  std::uint64_t seed = kDefaultSeed,
                                                  Backend backend = Backend::Parallel);

CorrelationSeries correlate_2d(const BakerMap& B, const Fn2& phi, const Fn2& psi, std::size_t n_max,
                               std::size_t n_samples, std::uint64_t seed = kDefaultSeed,
                               Backend backend = Backend::Parallel);

/// First n >= 1 at which the standard error exceeds half the estimate, or
/// one past the end when the series never reaches its noise floor. Lag 0 is
/// skipped since fits start at n = 1.
std::size_t noise_floor_index(const DecaySeries& s);

/// 256-point Gauss-Legendre rule on [0,1].
const std::vector<std::pair<double, double>>& fibre_rule();
/// psi-bar(x) = int_0^1 psi(x, y) dy by fibre_rule().
double fibre_average(const Fn2& psi, double x);

struct ProjectionRow {
    std::size_t n = 0;
    double two_d = 0.0;
    double two_d_se = 0.0;
    double one_d = 0.0;
    double one_d_se = 0.0;
    double discrepancy = 0.0;
    double combined_se = 0.0;
};

struct ProjectionReport {
    std::vector<ProjectionRow> rows;
    double max_discrepancy = 0.0;
    double max_ratio = 0.0;  // max discrepancy / combined_se
};

/// Compares the signed 2-D correlation of (phi0 o pi, psi) with the 1-D
/// correlation of (phi0, psi-bar).
ProjectionReport projection_identity_check(const BakerMap& B, const Fn1& phi0, const Fn2& psi,
                                           const std::vector<std::size_t>& n_list,
                                           std::size_t n_samples, std::uint64_t seed = kDefaultSeed,
                                           std::size_t grid = kDefaultGrid,
                                           Backend backend = Backend::Parallel);

/// As above but with an already computed 2-D series for (phi0 o pi, psi).
ProjectionReport projection_identity_check(const ExpandingMap& M, const CorrelationSeries& two_d,
                                           const Fn1& phi0, const Fn2& psi,
                                           const std::vector<std::size_t>& n_list,
                                           std::size_t grid = kDefaultGrid,
                                           Backend backend = Backend::Parallel);

struct LowerBoundReport {
    DecaySeries integral;  // (a) int (1/2 - x) L^n (1/2 - x) dm
    DecaySeries bound;     // (b) d_n / 16
    DecaySeries cor;       // (c) Cor_n(id, id) via the Koopman operator
    FitWindow window;
    PowerLawFit fit;
    double expected_exponent = 0.0;
    double slack = 0.0;
    double max_equality_gap = 0.0;      // max |a - c| in the window
    double max_inequality_deficit = 0.0;  // max (b - a)^+ in the window
    bool equality_holds = false;
    bool inequality_holds = false;
};

LowerBoundReport lower_bound_check(const UlamMatrix& U, const CutFunction& cut, std::size_t n_max,
                                   Backend backend = Backend::Parallel);

}  // namespace gbt
