#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gbt {

/// Values indexed by strictly increasing n, with optional per-point standard
/// errors (empty when the method is deterministic).
struct DecaySeries {
    std::vector<std::size_t> n;
    std::vector<double> value;
    std::vector<double> stderr_;
    std::string method;
    std::string description;
    std::size_t samples = 0;

    std::size_t size() const noexcept { return n.size(); }
    void push(std::size_t k, double v) {
        n.push_back(k);
        value.push_back(v);
    }
    void push(std::size_t k, double v, double se) {
        push(k, v);
        stderr_.push_back(se);
    }
};

struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0;  // natural log of the prefactor
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
    std::size_t points = 0;
    double residual_rms = 0.0;
    bool poor_fit = false;  // residual_rms above 0.2
};

/// Least squares of log v against log n over n_lo <= n <= n_hi. Non-positive
/// values are skipped; at least 8 usable points are required.
PowerLawFit fit_power_law(const std::vector<std::size_t>& n, const std::vector<double>& v,
                          std::size_t n_lo, std::size_t n_hi);

inline PowerLawFit fit_power_law(const DecaySeries& s, std::size_t n_lo, std::size_t n_hi) {
    return fit_power_law(s.n, s.value, n_lo, n_hi);
}

}  // namespace gbt
