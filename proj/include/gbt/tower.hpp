#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gbt/expanding_map.hpp"
#include "gbt/power_law.hpp"

namespace gbt {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x < hi; }
};

/// Concrete tower over the base Delta_0 = [x0, x0'). Level data are indexed
/// so that xs[n] = x_n and s[n] = 1 - x'_n for n = 0..depth, J[n] for
/// n = 0..depth-1 and I[k] for k = 1..depth (I[0] is unused and empty).
struct TowerPartition {
    double x0 = 0.0;
    double x0p = 0.0;
    double a = 0.0;
    std::vector<double> xs;
    std::vector<double> xps;
    std::vector<double> s;
    std::vector<double> mJ;   // m(J_n) = x_n - x_{n+1}
    std::vector<double> mJp;  // m(J'_n) = x'_{n+1} - x'_n
    std::vector<double> mI;   // m(I_k)
    std::vector<double> mIp;  // m(I'_k)
    std::vector<Interval> I;
    std::vector<Interval> Ip;
    std::size_t depth = 0;
    std::size_t requested_depth = 0;
    bool truncated = false;  // level widths fell below 10 root_tol

    Interval J(std::size_t n) const { return {xs[n + 1], xs[n]}; }
    Interval Jp(std::size_t n) const { return {xps[n], xps[n + 1]}; }
    Interval base() const { return {x0, x0p}; }
};

/// Period-2 orbit {x0, x0'} with x0 < a < x0'.
std::pair<double, double> find_period2(const ExpandingMap& M);

TowerPartition build_tower(const ExpandingMap& M, std::size_t depth);

struct TailMass {
    double value = 0.0;       // sum_{l>n} (l-n) (m(I_l) + m(I'_l))
    double partial = 0.0;     // contribution of the built levels
    double truncation = 0.0;  // contribution of the levels beyond depth
    bool truncation_warning = false;
};

/// The remainder beyond the built depth is summed in closed form: the level
/// masses telescope, so sum_{l>N} (l-n) m(I_l) = x_N + (N-n) m(J_N).
TailMass tail_mass(const TowerPartition& T, std::size_t n);

/// tail_mass(T, n).value for n = 0..depth-1 in one backward sweep.
std::vector<double> tail_mass_series(const TowerPartition& T);

struct SlopeCheck {
    std::string name;
    PowerLawFit fit;
    double expected = 0.0;
};

struct AsymptoticReport {
    std::vector<SlopeCheck> slopes;
    const SlopeCheck& find(const std::string& name) const;
};

/// Fitted log-log slopes of x_n, 1-x'_n, m(J), m(J'), m(I), m(I') and the mean
/// of f' over I_k, each against its theoretical exponent.
AsymptoticReport asymptotic_report(const TowerPartition& T, const CutFunction& cut,
                                   std::size_t n_lo = 100, std::size_t n_hi = 0);

struct DistortionReport {
    std::size_t level = 0;
    std::size_t samples = 0;
    double statistic = 0.0;  // max |(f^R)'(y)/(f^R)'(z) - 1| / |f^R y - f^R z|
    double beta_hat = 0.0;
};

/// Samples pairs of points in I_i and I'_i by pulling back pairs of base
/// points along the level's inverse branches.
DistortionReport distortion_check(const TowerPartition& T, const ExpandingMap& M, std::size_t level,
                                  std::size_t samples, std::uint64_t seed);

/// log (f^R)'(y) for the point y in I_level (right = true) or I'_level whose
/// image under f^R is u in the base; also returns y.
double log_return_derivative(const ExpandingMap& M, std::size_t level, bool right, double u,
                             double* y_out = nullptr);

inline constexpr std::size_t kReturnTimeCap = 10'000'000;

/// First return time to the base, located by binary search over the level
/// endpoints and falling back to direct iteration beyond the built depth.
std::size_t return_time(const TowerPartition& T, const ExpandingMap& M, double x);

/// First return time by following the orbit.
std::size_t return_time_direct(const TowerPartition& T, const ExpandingMap& M, double x);

}  // namespace gbt
