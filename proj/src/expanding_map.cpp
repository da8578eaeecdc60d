#include "gbt/expanding_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gbt/errors.hpp"
#include "gbt/root_finding.hpp"

namespace gbt {

namespace {

// Tightens the absolute tolerance for roots below 1e-3, where one step of f
// moves a point by far less than root_tol.
constexpr double kRelTol = 1e-9;

void check_half_open(double u, const char* what) {
    if (!(u >= 0.0 && u < 1.0)) {
        std::ostringstream os;
        os << what << ": argument " << u << " outside [0,1)";
        throw DomainError(os.str());
    }
}

}  // namespace

ExpandingMap::ExpandingMap(CutFunction cut, double root_tol)
    : cut_(std::move(cut)), a_(cut_.total_integral()), root_tol_(root_tol) {
    if (!(root_tol > 0.0)) throw PreconditionError("root_tol must be positive");
    const CutKind k = cut_.kind();
    if (k == CutKind::Linear || k == CutKind::SymmetricPower || k == CutKind::AsymmetricPower) {
        pw_.enabled = true;
        pw_.alpha = cut_.alpha();
        pw_.alpha_prime = cut_.alpha_prime();
        pw_.c0 = cut_.c0();
        pw_.c1 = cut_.c1();
        pw_.k0 = pw_.c0 / (pw_.alpha + 1.0);
        pw_.k1 = pw_.c1 / (pw_.alpha_prime + 1.0);
        pw_.phi_half = cut_.integral(0.5);
        pw_.gap_half = cut_.gap_integral(0.5);
    }
}

namespace {

inline double power(double t, double p) {
    if (p == 1.0) return t;
    if (p == 2.0) return t * t;
    if (p == 0.5) return std::sqrt(t);
    if (p == 1.5) return t * std::sqrt(t);
    if (p == 3.0) return t * t * t;
    return std::pow(t, p);
}

}  // namespace

double ExpandingMap::solve_left_power(double x) const {
    const PowerTerms& p = pw_;
    double guess;
    if (x >= p.phi_half) {
        const double ap = p.alpha_prime + 1.0;
        guess = 1.0 - std::pow((a_ - x) / p.k1, 1.0 / ap);
    } else {
        guess = x + p.k0 * x * power(x, p.alpha);
    }
    guess = std::clamp(guess, x, 1.0);
    auto fdf = [&p, x, this](double w, double& f, double& df) {
        if (w <= 0.5) {
            const double t = power(w, p.alpha);
            f = (w - x) - p.k0 * w * t;
            df = 1.0 - p.c0 * t;
        } else {
            const double s = 1.0 - w;
            const double t = power(s, p.alpha_prime);
            f = (a_ - x) - p.k1 * s * t;
            df = p.c1 * t;
        }
    };
    return solve_increasing(fdf, x, 1.0, guess, root_tol_, kRelTol).x;
}

double ExpandingMap::solve_right_power(double x) const {
    const PowerTerms& p = pw_;
    const double d = x - a_;
    double guess;
    if (d <= p.gap_half) {
        guess = std::pow(d / p.k0, 1.0 / (p.alpha + 1.0));
    } else {
        const double s = 1.0 - x;
        guess = x - p.k1 * s * power(s, p.alpha_prime);
    }
    guess = std::clamp(guess, d, 1.0);
    auto fdf = [&p, x, d](double w, double& f, double& df) {
        if (w <= 0.5) {
            const double t = power(w, p.alpha);
            f = p.k0 * w * t - d;
            df = p.c0 * t;
        } else {
            const double s = 1.0 - w;
            const double t = power(s, p.alpha_prime);
            f = (w - x) + p.k1 * s * t;
            df = 1.0 - p.c1 * t;
        }
    };
    return solve_increasing(fdf, d, 1.0, guess, root_tol_, kRelTol).x;
}

double ExpandingMap::solve_left(double x) const {
    // Phi(w) - x is concave and increasing, so Newton from below stays below.
    // w = x + G(w) >= x + G(x) gives the starting point.
    if (pw_.enabled) return solve_left_power(x);
    const double guess = std::clamp(x + cut_.gap_integral(x), x, 1.0);
    auto fdf = [this, x](double w, double& f, double& df) {
        if (w <= 0.5) {
            f = (w - x) - cut_.gap_integral(w);
        } else {
            f = (a_ - x) - cut_.tail_integral(1.0 - w);
        }
        df = cut_.value(w);
    };
    return solve_increasing(fdf, x, 1.0, guess, root_tol_, kRelTol).x;
}

double ExpandingMap::solve_right(double x) const {
    // w - Phi(w) - (x - a) is convex and increasing: 1 - w = 1 - x + H(1 - w)
    // gives w <= x - H(1 - x) as the starting point.
    if (pw_.enabled) return solve_right_power(x);
    const double d = x - a_;
    const double guess = std::clamp(x - cut_.tail_integral(1.0 - x), d, 1.0);
    auto fdf = [this, x, d](double w, double& f, double& df) {
        if (w <= 0.5) {
            f = cut_.gap_integral(w) - d;
        } else {
            f = (w - x) + cut_.tail_integral(1.0 - w);
        }
        df = cut_.complement(w);
    };
    return solve_increasing(fdf, d, 1.0, guess, root_tol_, kRelTol).x;
}

double ExpandingMap::forward(double x) const {
    check_half_open(x, "forward");
    if (x == a_ || x == 0.0) return 0.0;
    const double w = (x < a_) ? solve_left(x) : solve_right(x);
    return std::clamp(w, 0.0, kUpper);
}

MapDerivative ExpandingMap::derivative(double x) const {
    if (!(x > 0.0 && x < 1.0) || x == a_) {
        std::ostringstream os;
        os << "derivative: f is not differentiable at " << x;
        throw DomainError(os.str());
    }
    const double fx = forward(x);
    const double den = (x < a_) ? cut_.value(fx) : cut_.complement(fx);
    if (den < 1e-300) return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / den, false};
}

double ExpandingMap::inverse_left(double u) const {
    check_half_open(u, "inverse_left");
    return cut_.integral(u);
}

double ExpandingMap::inverse_right(double u) const {
    check_half_open(u, "inverse_right");
    return a_ + cut_.gap_integral(u);
}

std::vector<double> ExpandingMap::orbit(double x, std::size_t n) const {
    check_half_open(x, "orbit");
    std::vector<double> out;
    out.reserve(n + 1);
    out.push_back(x);
    for (std::size_t k = 0; k < n; ++k) {
        x = forward(x);
        out.push_back(x);
    }
    return out;
}

double ExpandingMap::fibre_factor(double x, double fx) const {
    return (x <= a_) ? cut_.value(fx) : cut_.complement(fx);
}

}  // namespace gbt
