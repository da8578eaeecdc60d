#pragma once

#include <cstddef>
#include <vector>

#include "gbt/cut_function.hpp"

namespace gbt {

struct MapDerivative {
    double value = 1.0;
    bool infinite = false;
};

/// The one-dimensional expanding factor f defined implicitly by
///
///     x = Phi(f(x))                       for x <= a
///     x = f(x) + a - Phi(f(x))            for x >  a
///
/// where a = Phi(1). By convention f(a) = 0.
class ExpandingMap {
public:
    static constexpr double kDefaultRootTol = 1e-12;
    static constexpr double kUpper = 1.0 - 0x1p-52;

    explicit ExpandingMap(CutFunction cut, double root_tol = kDefaultRootTol);

    const CutFunction& cut() const noexcept { return cut_; }
    double a() const noexcept { return a_; }
    double root_tol() const noexcept { return root_tol_; }

    double forward(double x) const;
    MapDerivative derivative(double x) const;
    double inverse_left(double u) const;
    double inverse_right(double u) const;
    std::vector<double> orbit(double x, std::size_t n) const;

    /// phi~(x) = phi(f(x)) for x <= a, 1 - phi(f(x)) otherwise; the fibre
    /// contraction of one step. `fx` must be forward(x).
    double fibre_factor(double x, double fx) const;

private:
    // Power-family constants cached so residuals need one power per call.
    struct PowerTerms {
        bool enabled = false;
        double alpha = 1.0;
        double alpha_prime = 1.0;
        double c0 = 1.0;
        double c1 = 1.0;
        double k0 = 0.5;  // c0 / (alpha + 1)
        double k1 = 0.5;  // c1 / (alpha' + 1)
        double phi_half = 0.375;  // Phi(1/2)
        double gap_half = 0.125;  // G(1/2)
    };

    double solve_left(double x) const;
    double solve_right(double x) const;
    double solve_left_power(double x) const;
    double solve_right_power(double x) const;

    CutFunction cut_;
    double a_;
    double root_tol_;
    PowerTerms pw_;
};

}  // namespace gbt
