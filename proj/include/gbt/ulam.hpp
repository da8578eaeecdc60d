#pragma once

#include <cstddef>
#include <vector>

#include "gbt/expanding_map.hpp"
#include "gbt/kernels.hpp"
#include "gbt/power_law.hpp"

namespace gbt {

inline constexpr std::size_t kMaxUlamCells = std::size_t{1} << 22;

/// Ulam discretization of the transfer operator of f on n equal cells,
/// P[i][j] = n m(E_i and f^-1 E_j), built from exact branch preimages.
class UlamMatrix {
public:
    static UlamMatrix build(const ExpandingMap& M, std::size_t n_cells,
                            Backend backend = Backend::Parallel);

    std::size_t n_cells() const noexcept { return n_; }
    const Csr& P() const noexcept { return P_; }
    const Csr& PT() const noexcept { return PT_; }

    /// One application of the transfer operator to cell averages: out = P^T in.
    void transfer(const double* in, double* out, Backend backend = Backend::Parallel) const;
    /// One application of the Koopman operator: out = P in, i.e. phi o f.
    void koopman(const double* in, double* out, Backend backend = Backend::Parallel) const;

    std::vector<double> push(std::vector<double> psi, std::size_t steps,
                             Backend backend = Backend::Parallel) const;

    double row_sum_residual() const;
    double column_sum_residual() const;
    double min_entry() const;
    std::size_t max_row_nnz() const;

    std::vector<double> cell_centres() const;

private:
    std::size_t n_ = 0;
    Csr P_;
    Csr PT_;
};

/// Density 2x sampled at cell centres (mean exactly 1).
std::vector<double> density_linear(std::size_t n_cells);

/// d_n = (1/n_cells) sum_i |(L^n lambda)_i - 1| for n = 0..n_max.
DecaySeries measure_decay(const UlamMatrix& U, const std::vector<double>& lambda, std::size_t n_max,
                          Backend backend = Backend::Parallel);

struct FitWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;
    bool floor_reached = false;
};

/// Window from n_lo up to (excluding) the first n with value below
/// floor_factor / n_cells, or to the end of the series.
FitWindow decay_fit_window(const DecaySeries& s, std::size_t n_cells, std::size_t n_lo = 10,
                           double floor_factor = 10.0);

struct AntisymmetryReport {
    std::size_t steps = 0;
    double antisymmetry = 0.0;  // max over steps of max_i |v_i + v_{n-1-i}|
    double monotonicity = 0.0;  // max over steps of max_i (v_{i+1} - v_i)^+
    std::vector<double> antisymmetry_by_step;
    std::vector<double> monotonicity_by_step;
};

/// Pushes psi = 1/2 - x through the operator and measures how far each
/// iterate is from being antisymmetric about 1/2 and non-increasing.
AntisymmetryReport antisymmetry_check(const UlamMatrix& U, const CutFunction& cut, std::size_t steps,
                                      Backend backend = Backend::Parallel);

}  // namespace gbt
