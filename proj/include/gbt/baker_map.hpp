#pragma once

#include <array>
#include <cstddef>

#include "gbt/expanding_map.hpp"

namespace gbt {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Jacobian2 {
    // Row-major: m[0] = {dF/dx, dF/dy}, m[1] = {dg/dx, dg/dy}.
    std::array<std::array<double, 2>, 2> m{};
    bool one_sided = false;

    double det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

/// The area-preserving map B(x, y) = (f(x), g(x, y)) on the unit square with
///
///     g(x, y) = phi(f(x)) y                    for x <= a
///     g(x, y) = phi(f(x)) + (1 - phi(f(x))) y  for x >  a
class BakerMap {
public:
    explicit BakerMap(ExpandingMap factor) : factor_(std::move(factor)) {}

    const ExpandingMap& factor() const noexcept { return factor_; }

    Point2 forward(double x, double y) const;
    /// forward() that also reports the fibre factor d g / d y of the step.
    Point2 forward(double x, double y, double& contraction) const;
    Point2 iterate(double x, double y, std::size_t n) const;
    Jacobian2 jacobian(double x, double y) const;
    /// d g_n / d y = prod_{k<n} phi~(f^k x).
    double fibre_contraction(double x, std::size_t n) const;

private:
    ExpandingMap factor_;
};

}  // namespace gbt
