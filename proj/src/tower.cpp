#include "gbt/tower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gbt/errors.hpp"
#include "gbt/rng.hpp"

namespace gbt {

namespace {

void require_tower_cut(const ExpandingMap& M) {
    if (M.cut().is_constant()) throw PreconditionError("tower requires non-constant cut");
}

}  // namespace

std::pair<double, double> find_period2(const ExpandingMap& M) {
    require_tower_cut(M);
    const double tol = M.root_tol();
    double x = 0.5 * M.a();
    for (int it = 0; it < 1'000'000; ++it) {
        const double next = M.inverse_left(M.inverse_right(x));
        if (std::abs(next - x) <= tol) {
            return {next, M.inverse_right(next)};
        }
        x = next;
    }
    throw ConvergenceError("period-2 iteration did not converge in 1e6 steps");
}

TowerPartition build_tower(const ExpandingMap& M, std::size_t depth) {
    require_tower_cut(M);
    if (depth < 1) throw PreconditionError("tower depth must be at least 1");
    const auto& cut = M.cut();
    const double floor = 10.0 * M.root_tol();

    TowerPartition T;
    std::tie(T.x0, T.x0p) = find_period2(M);
    T.a = M.a();
    T.requested_depth = depth;
    T.xs.reserve(depth + 1);
    T.s.reserve(depth + 1);
    T.mJ.reserve(depth + 1);
    T.mJp.reserve(depth + 1);

    T.xs.push_back(T.x0);
    T.s.push_back(1.0 - T.x0p);
    T.mJ.push_back(cut.gap_integral(T.x0));
    T.mJp.push_back(cut.tail_integral(T.s[0]));

    std::size_t n = 0;
    for (; n < depth; ++n) {
        if (T.mJ[n] < floor || T.mJp[n] < floor) {
            T.truncated = true;
            break;
        }
        const double x = T.xs[n] - T.mJ[n];
        const double s = T.s[n] - T.mJp[n];
        T.xs.push_back(x);
        T.s.push_back(s);
        T.mJ.push_back(cut.gap_integral(x));
        T.mJp.push_back(cut.tail_integral(s));
    }
    T.depth = n;

    T.xps.resize(T.depth + 1);
    T.xps[0] = T.x0p;
    for (std::size_t k = 1; k <= T.depth; ++k) T.xps[k] = 1.0 - T.s[k];

    T.mI.assign(T.depth + 1, 0.0);
    T.mIp.assign(T.depth + 1, 0.0);
    T.I.assign(T.depth + 1, Interval{});
    T.Ip.assign(T.depth + 1, Interval{});
    const double a = T.a;
    for (std::size_t k = 1; k <= T.depth; ++k) {
        T.mI[k] = T.mJ[k - 1] - T.mJ[k];
        T.mIp[k] = T.mJp[k - 1] - T.mJp[k];
        T.I[k] = {a + T.mJ[k], a + T.mJ[k - 1]};
        T.Ip[k] = {a - T.mJp[k - 1], a - T.mJp[k]};
    }
    return T;
}

TailMass tail_mass(const TowerPartition& T, std::size_t n) {
    if (n >= T.depth) {
        std::ostringstream os;
        os << "tail_mass: level " << n << " not below depth " << T.depth;
        throw PreconditionError(os.str());
    }
    const std::size_t N = T.depth;
    TailMass out;
    for (std::size_t l = N; l > n; --l) {
        out.partial += static_cast<double>(l - n) * (T.mI[l] + T.mIp[l]);
    }
    const double gap = static_cast<double>(N - n);
    out.truncation = (T.xs[N] + gap * T.mJ[N]) + (T.s[N] + gap * T.mJp[N]);
    out.value = out.partial + out.truncation;
    out.truncation_warning = out.truncation > 0.1 * out.value;
    return out;
}

std::vector<double> tail_mass_series(const TowerPartition& T) {
    const std::size_t N = T.depth;
    std::vector<double> out(N, 0.0);
    if (N == 0) return out;
    // T(n) = T(n+1) + sum_{l>n} m_l, seeded with the closed-form remainder.
    double mass_beyond = T.mJ[N] + T.mJp[N];
    double tail = T.xs[N] + T.s[N];
    for (std::size_t n = N; n-- > 0;) {
        mass_beyond += T.mI[n + 1] + T.mIp[n + 1];
        tail += mass_beyond;
        out[n] = tail;
    }
    return out;
}

const SlopeCheck& AsymptoticReport::find(const std::string& name) const {
    for (const auto& s : slopes) {
        if (s.name == name) return s;
    }
    throw PreconditionError("asymptotic report has no slope named '" + name + "'");
}

AsymptoticReport asymptotic_report(const TowerPartition& T, const CutFunction& cut,
                                   std::size_t n_lo, std::size_t n_hi) {
    if (T.depth < 100) throw PreconditionError("asymptotic_report needs depth >= 100");
    if (n_hi == 0 || n_hi > T.depth) n_hi = T.depth;
    const double al = cut.alpha();
    const double ar = cut.alpha_prime();

    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k <= T.depth; ++k) idx.push_back(k);
    auto series = [&](auto&& value) {
        std::vector<double> v(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) v[j] = value(idx[j]);
        return v;
    };

    AsymptoticReport R;
    auto add = [&](const std::string& name, const std::vector<double>& v, double expected,
                   std::size_t hi) {
        R.slopes.push_back({name, fit_power_law(idx, v, n_lo, hi), expected});
    };
    add("x_n", series([&](std::size_t k) { return T.xs[k]; }), -1.0 / al, n_hi);
    add("1-xp_n", series([&](std::size_t k) { return T.s[k]; }), -1.0 / ar, n_hi);
    add("mJ_n", series([&](std::size_t k) { return T.mJ[k]; }), -(1.0 + 1.0 / al), n_hi);
    add("mJp_n", series([&](std::size_t k) { return T.mJp[k]; }), -(1.0 + 1.0 / ar), n_hi);
    add("mI_k", series([&](std::size_t k) { return T.mI[k]; }), -(2.0 + 1.0 / al), n_hi);
    add("mIp_k", series([&](std::size_t k) { return T.mIp[k]; }), -(2.0 + 1.0 / ar), n_hi);
    add("mean_df_I_k", series([&](std::size_t k) { return T.mJ[k - 1] / T.mI[k]; }), 1.0, n_hi);
    add("mean_df_Ip_k", series([&](std::size_t k) { return T.mJp[k - 1] / T.mIp[k]; }), 1.0, n_hi);
    return R;
}

double log_return_derivative(const ExpandingMap& M, std::size_t level, bool right, double u,
                             double* y_out) {
    const auto& cut = M.cut();
    double w = u;
    double acc = 0.0;
    for (std::size_t j = 0; j < level; ++j) {
        if (right) {
            acc -= std::log1p(-cut.complement(w));
            w = M.inverse_left(w);
        } else {
            acc -= std::log1p(-cut.value(w));
            w = M.inverse_right(w);
        }
    }
    if (right) {
        acc -= std::log1p(-cut.value(w));
        if (y_out) *y_out = M.inverse_right(w);
    } else {
        acc -= std::log1p(-cut.complement(w));
        if (y_out) *y_out = M.inverse_left(w);
    }
    return acc;
}

DistortionReport distortion_check(const TowerPartition& T, const ExpandingMap& M, std::size_t level,
                                  std::size_t samples, std::uint64_t seed) {
    require_tower_cut(M);
    if (level < 1 || level >= T.depth) {
        std::ostringstream os;
        os << "distortion_check: level " << level << " outside [1, " << T.depth << ")";
        throw PreconditionError(os.str());
    }
    DistortionReport out;
    out.level = level;
    out.samples = samples;
    out.beta_hat = std::max(1.0 / M.derivative(T.x0).value, 1.0 / M.derivative(T.x0p).value);

    const double width = T.x0p - T.x0;
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = T.x0 + width * counter_uniform(seed, i, 0);
        const double v = T.x0 + width * counter_uniform(seed, i, 1);
        if (u == v) continue;
        for (bool right : {true, false}) {
            const double lu = log_return_derivative(M, level, right, u);
            const double lv = log_return_derivative(M, level, right, v);
            worst = std::max(worst, std::abs(std::expm1(lu - lv)) / std::abs(u - v));
        }
    }
    out.statistic = worst;
    return out;
}

std::size_t return_time_direct(const TowerPartition& T, const ExpandingMap& M, double x) {
    if (!T.base().contains(x)) throw DomainError("return_time: point outside the base");
    double y = x;
    for (std::size_t n = 1; n <= kReturnTimeCap; ++n) {
        y = M.forward(y);
        if (T.base().contains(y)) return n;
    }
    throw OverflowError("return_time: no return within 1e7 iterations");
}

std::size_t return_time(const TowerPartition& T, const ExpandingMap& M, double x) {
    if (!T.base().contains(x)) throw DomainError("return_time: point outside the base");
    const std::size_t N = T.depth;
    if (x < T.a) {
        // I'_k lower ends increase with k; find the last one at or below x.
        std::size_t lo = 1;
        std::size_t hi = N + 1;
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (T.Ip[mid].lo <= x) lo = mid;
            else hi = mid;
        }
        if (T.Ip[lo].contains(x)) return lo + 1;
    } else if (x > T.a) {
        // I_k lower ends decrease with k; find the first one at or below x.
        std::size_t lo = 0;
        std::size_t hi = N;
        if (T.I[N].lo <= x) {
            while (hi - lo > 1) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (T.I[mid].lo <= x) hi = mid;
                else lo = mid;
            }
            if (T.I[hi].contains(x)) return hi + 1;
        }
    }
    return return_time_direct(T, M, x);
}

}  // namespace gbt
