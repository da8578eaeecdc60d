#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "gbt/errors.hpp"

namespace gbt {

struct RootResult {
    double x;
    double lo;
    double hi;
    int iterations;
};

/// Safeguarded Newton iteration for an increasing function on [lo, hi] with
/// f(lo) <= 0 <= f(hi). `fdf(x, f, df)` fills value and derivative. Newton
/// steps are accepted only while they stay strictly inside the bracket and
/// halve it at least as fast as bisection would over two steps; otherwise the
/// midpoint is taken. Terminates once the bracket is at most `tol` wide; a
/// converged Newton iterate is closed off by probing tol/2 to the open side.
/// With `rel_tol` > 0 the width target shrinks to rel_tol * |x| for small roots.
template <class FDF>
RootResult solve_increasing(FDF&& fdf, double lo, double hi, double guess, double abs_tol,
                            double rel_tol = 0.0, int max_iter = 400) {
    double x = (guess >= lo && guess <= hi) ? guess : 0.5 * (lo + hi);
    double prev_width = hi - lo;
    for (int it = 1; it <= max_iter; ++it) {
        double f = 0.0;
        double df = 0.0;
        fdf(x, f, df);
        if (f == 0.0) return {x, x, x, it};
        const double tol = rel_tol > 0.0 ? std::fmin(abs_tol, rel_tol * std::abs(x)) : abs_tol;
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= tol) return {x, lo, hi, it};

        const bool usable = df > 0.0 && std::isfinite(df);
        const double step = usable ? f / df : 0.0;
        if (usable && std::abs(step) <= 0.5 * tol) {
            // Newton has converged inside tol: one probe decides the open side.
            const double root = std::fmin(std::fmax(x - step, lo), hi);
            const double probe =
                (f < 0.0) ? std::fmin(root + 0.5 * tol, hi) : std::fmax(root - 0.5 * tol, lo);
            double fp = 0.0;
            double dfp = 0.0;
            fdf(probe, fp, dfp);
            if (f < 0.0) {
                if (fp >= 0.0) hi = probe;
                else lo = probe;
            } else {
                if (fp <= 0.0) lo = probe;
                else hi = probe;
            }
            if (hi - lo <= tol) return {std::fmin(std::fmax(root, lo), hi), lo, hi, it};
            x = 0.5 * (lo + hi);
            prev_width = hi - lo;
            continue;
        }

        double next = 0.5 * (lo + hi);
        if (usable) {
            const double newton = x - step;
            if (newton > lo && newton < hi && std::abs(step) < 0.5 * prev_width) next = newton;
        }
        prev_width = std::abs(next - x);
        x = next;
    }
    std::ostringstream os;
    os << "root solve did not converge in " << max_iter << " iterations, bracket [" << lo << ", "
       << hi << "]";
    throw ConvergenceError(os.str());
}

}  // namespace gbt
