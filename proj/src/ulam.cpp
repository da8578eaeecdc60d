#include "gbt/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gbt/errors.hpp"

namespace gbt {

namespace {

constexpr std::size_t kColumnCap = 8;

// Adds n * |[p,q) and E_i| for every cell i met by [p,q).
std::size_t scatter_piece(long double p, long double q, std::size_t n, std::uint32_t* idx,
                          double* val, std::size_t count) {
    if (!(q > p)) return count;
    const long double nl = static_cast<long double>(n);
    auto first = static_cast<std::size_t>(std::floor(p * nl));
    auto last = static_cast<std::size_t>(std::ceil(q * nl));
    last = std::min(last, n);
    for (std::size_t i = first; i < last; ++i) {
        const long double lo = std::max(p, static_cast<long double>(i) / nl);
        const long double hi = std::min(q, static_cast<long double>(i + 1) / nl);
        if (!(hi > lo)) continue;
        const double w = static_cast<double>(nl * (hi - lo));
        if (count > 0 && idx[count - 1] == i) {
            val[count - 1] += w;
            continue;
        }
        if (count == kColumnCap) throw ConvergenceError("ulam column overflow");
        idx[count] = static_cast<std::uint32_t>(i);
        val[count] = w;
        ++count;
    }
    return count;
}

}  // namespace

UlamMatrix UlamMatrix::build(const ExpandingMap& M, std::size_t n_cells, Backend backend) {
    if (n_cells < 2) throw PreconditionError("ulam: need at least 2 cells");
    if (n_cells > kMaxUlamCells) {
        std::ostringstream os;
        os << "ulam: " << n_cells << " cells exceeds the memory guard of " << kMaxUlamCells;
        throw PreconditionError(os.str());
    }
    const auto& cut = M.cut();
    if (cut.is_constant() && cut.total_integral() != 0.5) {
        throw PreconditionError("ulam: constant cuts other than 1/2 are not supported");
    }

    const long double a = cut.total_integral();
    const long double nl = static_cast<long double>(n_cells);
    // Left preimage ends L_j = Phi(u_j); the right ones are u_j + a - L_j so
    // that the two pieces of every column have total length exactly 1/n.
    std::vector<long double> L(n_cells + 1);
    for (std::size_t j = 0; j <= n_cells; ++j) {
        L[j] = (j == n_cells) ? a : static_cast<long double>(cut.integral(static_cast<double>(j) / static_cast<double>(n_cells)));
    }
    auto R = [&](std::size_t j) { return static_cast<long double>(j) / nl + a - L[j]; };

    auto column = [&](std::size_t j, std::uint32_t* idx, double* val) {
        std::size_t c = scatter_piece(L[j], L[j + 1], n_cells, idx, val, 0);
        return scatter_piece(R(j), R(j + 1), n_cells, idx, val, c);
    };

    UlamMatrix U;
    U.n_ = n_cells;
    U.PT_ = (backend == Backend::Serial)
                ? serial::build_rows(n_cells, n_cells, kColumnCap, column)
                : omp::build_rows(n_cells, n_cells, kColumnCap, column);
    U.P_ = transpose(U.PT_);
    return U;
}

void UlamMatrix::transfer(const double* in, double* out, Backend backend) const {
    csr_apply(backend, PT_, in, out);
}

void UlamMatrix::koopman(const double* in, double* out, Backend backend) const {
    csr_apply(backend, P_, in, out);
}

std::vector<double> UlamMatrix::push(std::vector<double> psi, std::size_t steps,
                                     Backend backend) const {
    if (psi.size() != n_) throw PreconditionError("push: vector length differs from cell count");
    std::vector<double> next(n_);
    for (std::size_t s = 0; s < steps; ++s) {
        transfer(psi.data(), next.data(), backend);
        psi.swap(next);
    }
    return psi;
}

namespace {

double max_sum_residual(const Csr& A) {
    double worst = 0.0;
    for (std::size_t r = 0; r < A.rows; ++r) {
        long double s = 0.0L;
        for (std::size_t p = A.ptr[r]; p < A.ptr[r + 1]; ++p) s += A.val[p];
        worst = std::max(worst, static_cast<double>(std::fabs(s - 1.0L)));
    }
    return worst;
}

}  // namespace

double UlamMatrix::row_sum_residual() const { return max_sum_residual(P_); }
double UlamMatrix::column_sum_residual() const { return max_sum_residual(PT_); }

double UlamMatrix::min_entry() const {
    return P_.val.empty() ? 0.0 : *std::min_element(P_.val.begin(), P_.val.end());
}

std::size_t UlamMatrix::max_row_nnz() const {
    std::size_t m = 0;
    for (std::size_t r = 0; r < P_.rows; ++r) m = std::max(m, P_.ptr[r + 1] - P_.ptr[r]);
    return m;
}

std::vector<double> UlamMatrix::cell_centres() const {
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n_);
    return c;
}

std::vector<double> density_linear(std::size_t n_cells) {
    std::vector<double> d(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        d[i] = (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n_cells);
    }
    return d;
}

DecaySeries measure_decay(const UlamMatrix& U, const std::vector<double>& lambda, std::size_t n_max,
                          Backend backend) {
    const std::size_t n = U.n_cells();
    if (lambda.size() != n) throw PreconditionError("measure_decay: density length differs from cell count");
    DecaySeries out;
    out.method = "ulam";
    out.description = "total variation distance to Lebesgue";
    std::vector<double> v = lambda;
    std::vector<double> next(n);
    auto tv = [&](const std::vector<double>& w) {
        double s = 0.0;
        for (double x : w) s += std::abs(x - 1.0);
        return s / static_cast<double>(n);
    };
    out.push(0, tv(v));
    for (std::size_t k = 1; k <= n_max; ++k) {
        U.transfer(v.data(), next.data(), backend);
        v.swap(next);
        out.push(k, tv(v));
    }
    return out;
}

FitWindow decay_fit_window(const DecaySeries& s, std::size_t n_cells, std::size_t n_lo,
                           double floor_factor) {
    FitWindow w;
    w.lo = n_lo;
    w.hi = s.n.empty() ? 0 : s.n.back();
    const double floor = floor_factor / static_cast<double>(n_cells);
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.n[k] >= n_lo && s.value[k] < floor) {
            w.hi = s.n[k] - 1;
            w.floor_reached = true;
            break;
        }
    }
    return w;
}

AntisymmetryReport antisymmetry_check(const UlamMatrix& U, const CutFunction& cut, std::size_t steps,
                                      Backend backend) {
    if (!cut.symmetric()) throw PreconditionError("antisymmetry_check requires a symmetric cut");
    const std::size_t n = U.n_cells();
    if (n % 2 != 0) throw PreconditionError("antisymmetry_check requires an even cell count");

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        // 1/2 - centre_i, written so that v[i] = -v[n-1-i] holds exactly.
        v[i] = (static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(i)) / (2.0 * static_cast<double>(n));
    }
    std::vector<double> next(n);

    AntisymmetryReport r;
    r.steps = steps;
    auto measure = [&](const std::vector<double>& w) {
        double anti = 0.0;
        double mono = 0.0;
        for (std::size_t i = 0; i < n; ++i) anti = std::max(anti, std::abs(w[i] + w[n - 1 - i]));
        for (std::size_t i = 0; i + 1 < n; ++i) mono = std::max(mono, w[i + 1] - w[i]);
        r.antisymmetry_by_step.push_back(anti);
        r.monotonicity_by_step.push_back(mono);
        r.antisymmetry = std::max(r.antisymmetry, anti);
        r.monotonicity = std::max(r.monotonicity, mono);
    };
    measure(v);
    for (std::size_t s = 0; s < steps; ++s) {
        U.transfer(v.data(), next.data(), backend);
        v.swap(next);
        measure(v);
    }
    return r;
}

}  // namespace gbt
