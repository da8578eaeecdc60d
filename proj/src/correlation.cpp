#include "gbt/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "gbt/errors.hpp"

namespace gbt {

Fn1 observable_1d(const std::string& name) {
    if (name == "id" || name == "x") return [](double x) { return x; };
    if (name == "cos2pix") return [](double x) { return std::cos(2.0 * std::numbers::pi * x); };
    if (name == "one") return [](double) { return 1.0; };
    throw PreconditionError("unknown 1-D observable '" + name + "' (id, cos2pix, one)");
}

Fn2 observable_2d(const std::string& name) {
    if (name == "x") return [](double x, double) { return x; };
    if (name == "y") return [](double, double y) { return y; };
    if (name == "xy") return [](double x, double y) { return x * y; };
    if (name == "cos2pix") {
        return [](double x, double) { return std::cos(2.0 * std::numbers::pi * x); };
    }
    if (name == "one") return [](double, double) { return 1.0; };
    throw PreconditionError("unknown 2-D observable '" + name + "' (x, y, xy, cos2pix, one)");
}

namespace {

CorrelationSeries from_moments(const LaggedMoments& m, std::size_t k, const std::string& method,
                               const std::string& description) {
    CorrelationSeries out;
    out.series.method = method;
    out.series.description = description;
    out.series.samples = m.count;
    const double N = static_cast<double>(m.count);
    const double mu_y = m.plain[k * 2] / N;
    const double m_y2 = m.plain[k * 2 + 1] / N;
    for (std::size_t n = 0; n < m.lags; ++n) {
        const double mu_x = m.at(k, n, 1) / N;
        const double c = m.at(k, n, 0) / N - mu_x * mu_y;
        // Plug-in variance of the influence function (X - mu_x) Y - c.
        const double e2 = m.at(k, n, 2) / N - 2.0 * mu_x * m.at(k, n, 3) / N + mu_x * mu_x * m_y2;
        const double se = std::sqrt(std::max(e2 - c * c, 0.0) / N);
        out.series.push(n, std::abs(c), se);
        out.signed_value.push_back(c);
    }
    return out;
}

template <class Raw>
std::vector<double> sample_means(Backend backend, std::size_t n_samples, std::size_t pairs,
                                 const Raw& raw) {
    auto s = [&](std::size_t i, double*, double* Y) { raw(i, Y); };
    const LaggedMoments m = accumulate_lagged(backend, n_samples, pairs, 0, s);
    std::vector<double> mean(pairs);
    for (std::size_t k = 0; k < pairs; ++k) mean[k] = m.plain[k * 2] / static_cast<double>(n_samples);
    return mean;
}

}  // namespace

CorrelationSeries correlate_1d_ulam(const UlamMatrix& U, const Fn1& phi, const Fn1& psi,
                                    std::size_t n_max, Backend backend) {
    const std::size_t n = U.n_cells();
    const auto c = U.cell_centres();
    std::vector<double> ph(n);
    std::vector<double> v(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ph[i] = phi(c[i]);
        v[i] = psi(c[i]);
        mean += v[i];
    }
    mean /= static_cast<double>(n);
    for (double& x : v) x -= mean;

    CorrelationSeries out;
    out.series.method = "ulam";
    out.series.description = "1-D correlation on the Ulam grid";
    out.series.samples = n;
    std::vector<double> next(n);
    for (std::size_t k = 0; k <= n_max; ++k) {
        if (k > 0) {
            U.transfer(v.data(), next.data(), backend);
            v.swap(next);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += ph[i] * v[i];
        s /= static_cast<double>(n);
        out.series.push(k, std::abs(s));
        out.signed_value.push_back(s);
    }
    return out;
}

CorrelationSeries correlate_1d_quadrature(const ExpandingMap& M, const Fn1& phi, const Fn1& psi,
                                          std::size_t n_max, std::size_t grid, Backend backend) {
    if (grid == 0) throw PreconditionError("correlate_1d: empty grid");
    const double h = 1.0 / static_cast<double>(grid);
    auto point = [h](std::size_t i) { return (static_cast<double>(i) + 0.5) * h; };
    const double psi_mean =
        sample_means(backend, grid, 1, [&](std::size_t i, double* Y) { Y[0] = psi(point(i)); })[0];

    const std::size_t lags = n_max + 1;
    auto sample = [&](std::size_t i, double* X, double* Y) {
        double x = point(i);
        Y[0] = psi(x) - psi_mean;
        for (std::size_t n = 0; n < lags; ++n) {
            X[n] = phi(x);
            if (n + 1 < lags) x = M.forward(x);
        }
    };
    const LaggedMoments m = accumulate_lagged(backend, grid, 1, lags, sample);
    return from_moments(m, 0, "quadrature", "1-D correlation over a uniform grid of orbits");
}

CorrelationSeries correlate_1d(const ExpandingMap& M, const Fn1& phi, const Fn1& psi,
                               std::size_t n_max, const Correlate1DOptions& opt) {
    if (opt.method == Method1D::Quadrature) {
        return correlate_1d_quadrature(M, phi, psi, n_max, opt.grid, opt.backend);
    }
    const UlamMatrix U = UlamMatrix::build(M, opt.cells, opt.backend);
    return correlate_1d_ulam(U, phi, psi, n_max, opt.backend);
}

double method_disagreement(const DecaySeries& a, const DecaySeries& b, std::size_t n_lo,
                           std::size_t n_hi, double floor) {
    double worst = 0.0;
    const std::size_t len = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < len; ++k) {
        if (a.n[k] != b.n[k]) throw PreconditionError("method_disagreement: series not aligned");
        if (a.n[k] < n_lo || a.n[k] > n_hi) continue;
        if (a.value[k] <= floor || b.value[k] <= floor) continue;
        const double mid = 0.5 * (a.value[k] + b.value[k]);
        worst = std::max(worst, std::abs(a.value[k] - b.value[k]) / mid);
    }
    return worst;
}

std::vector<CorrelationSeries> correlate_2d_multi(const BakerMap& B,
                                                  const std::vector<std::pair<Fn2, Fn2>>& pairs,
                                                  std::size_t n_max, std::size_t n_samples,
                                                  std::uint64_t seed, Backend backend) {
    if (n_samples < 2) throw PreconditionError("correlate_2d: need at least 2 samples");
    const std::size_t K = pairs.size();
    const auto psi_mean = sample_means(backend, n_samples, K, [&](std::size_t i, double* Y) {
        const double x = counter_uniform(seed, i, 0);
        const double y = counter_uniform(seed, i, 1);
        for (std::size_t k = 0; k < K; ++k) Y[k] = pairs[k].second(x, y);
    });

    const std::size_t lags = n_max + 1;
    auto sample = [&](std::size_t i, double* X, double* Y) {
        Point2 p{counter_uniform(seed, i, 0), counter_uniform(seed, i, 1)};
        for (std::size_t k = 0; k < K; ++k) Y[k] = pairs[k].second(p.x, p.y) - psi_mean[k];
        for (std::size_t n = 0; n < lags; ++n) {
            for (std::size_t k = 0; k < K; ++k) X[k * lags + n] = pairs[k].first(p.x, p.y);
            if (n + 1 < lags) p = B.forward(p.x, p.y);
        }
    };
    const LaggedMoments m = accumulate_lagged(backend, n_samples, K, lags, sample);
    std::vector<CorrelationSeries> out;
    for (std::size_t k = 0; k < K; ++k) {
        out.push_back(from_moments(m, k, "montecarlo", "2-D correlation over sampled orbits"));
    }
    return out;
}

CorrelationSeries correlate_2d(const BakerMap& B, const Fn2& phi, const Fn2& psi, std::size_t n_max,
                               std::size_t n_samples, std::uint64_t seed, Backend backend) {
    return std::move(correlate_2d_multi(B, {{phi, psi}}, n_max, n_samples, seed, backend).front());
}

std::size_t noise_floor_index(const DecaySeries& s) {
    for (std::size_t k = 0; k < s.size() && k < s.stderr_.size(); ++k) {
        if (s.n[k] == 0) continue;
        if (s.stderr_[k] > 0.5 * s.value[k]) return s.n[k];
    }
    return s.n.empty() ? 0 : s.n.back() + 1;
}

const std::vector<std::pair<double, double>>& fibre_rule() {
    static const std::vector<std::pair<double, double>> rule = [] {
        constexpr int order = 256;
        const auto zeros = boost::math::legendre_p_zeros<double>(order);
        std::vector<std::pair<double, double>> r;
        for (double z : zeros) {
            const double dp = boost::math::legendre_p_prime(order, z);
            const double w = 1.0 / ((1.0 - z * z) * dp * dp);  // half the [-1,1] weight
            r.emplace_back(0.5 * (1.0 + z), w);
            if (z != 0.0) r.emplace_back(0.5 * (1.0 - z), w);
        }
        std::sort(r.begin(), r.end());
        return r;
    }();
    return rule;
}

double fibre_average(const Fn2& psi, double x) {
    double s = 0.0;
    for (const auto& [y, w] : fibre_rule()) s += w * psi(x, y);
    return s;
}

ProjectionReport projection_identity_check(const ExpandingMap& M, const CorrelationSeries& two_d,
                                           const Fn1& phi0, const Fn2& psi,
                                           const std::vector<std::size_t>& n_list,
                                           std::size_t grid, Backend backend) {
    if (n_list.empty()) throw PreconditionError("projection_identity_check: empty n list");
    const std::size_t n_max = *std::max_element(n_list.begin(), n_list.end());
    if (two_d.signed_value.size() <= n_max) {
        throw PreconditionError("projection_identity_check: 2-D series too short");
    }
    const Fn1 psi_bar = [&psi](double x) { return fibre_average(psi, x); };
    const CorrelationSeries one_d = correlate_1d_quadrature(M, phi0, psi_bar, n_max, grid, backend);

    ProjectionReport rep;
    for (std::size_t n : n_list) {
        ProjectionRow r;
        r.n = n;
        r.two_d = two_d.signed_value[n];
        r.two_d_se = two_d.series.stderr_[n];
        r.one_d = one_d.signed_value[n];
        r.one_d_se = one_d.series.stderr_[n];
        r.discrepancy = std::abs(r.two_d - r.one_d);
        r.combined_se = std::hypot(r.two_d_se, r.one_d_se);
        rep.max_discrepancy = std::max(rep.max_discrepancy, r.discrepancy);
        if (r.combined_se > 0.0) rep.max_ratio = std::max(rep.max_ratio, r.discrepancy / r.combined_se);
        rep.rows.push_back(r);
    }
    return rep;
}

ProjectionReport projection_identity_check(const BakerMap& B, const Fn1& phi0, const Fn2& psi,
                                           const std::vector<std::size_t>& n_list,
                                           std::size_t n_samples, std::uint64_t seed,
                                           std::size_t grid, Backend backend) {
    if (n_list.empty()) throw PreconditionError("projection_identity_check: empty n list");
    const std::size_t n_max = *std::max_element(n_list.begin(), n_list.end());
    const Fn2 phi2 = [&phi0](double x, double) { return phi0(x); };
    const CorrelationSeries two_d = correlate_2d(B, phi2, psi, n_max, n_samples, seed, backend);
    return projection_identity_check(B.factor(), two_d, phi0, psi, n_list, grid, backend);
}

LowerBoundReport lower_bound_check(const UlamMatrix& U, const CutFunction& cut, std::size_t n_max,
                                   Backend backend) {
    if (!cut.symmetric()) throw PreconditionError("lower_bound_check requires a symmetric cut");
    const std::size_t n = U.n_cells();
    const double nd = static_cast<double>(n);
    const auto c = U.cell_centres();

    // w = 1/2 - x at the centres, exactly antisymmetric.
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (nd - 1.0 - 2.0 * static_cast<double>(i)) / (2.0 * nd);
    std::vector<double> pushed = w;       // L^n w
    std::vector<double> pulled = c;       // P^n id, i.e. id o f^n
    std::vector<double> scratch(n);

    LowerBoundReport rep;
    rep.integral.method = rep.bound.method = rep.cor.method = "ulam";
    rep.integral.description = "int (1/2 - x) L^n (1/2 - x) dm";
    rep.bound.description = "(1/16) |f_*^n lambda - m|";
    rep.cor.description = "Cor_n(id, id) via the Koopman operator";
    rep.slack = 10.0 / nd;
    rep.expected_exponent = -1.0 / cut.alpha();

    for (std::size_t k = 0; k <= n_max; ++k) {
        if (k > 0) {
            U.transfer(pushed.data(), scratch.data(), backend);
            pushed.swap(scratch);
            U.koopman(pulled.data(), scratch.data(), backend);
            pulled.swap(scratch);
        }
        double a = 0.0;
        double tv = 0.0;
        double cor = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a += w[i] * pushed[i];
            tv += std::abs(pushed[i]);
            cor += pulled[i] * (c[i] - 0.5);
        }
        rep.integral.push(k, a / nd);
        rep.bound.push(k, tv / nd / 16.0);
        rep.cor.push(k, std::abs(cor / nd));
    }

    rep.window = decay_fit_window(rep.cor, n);
    rep.fit = fit_power_law(rep.cor, rep.window.lo, rep.window.hi);
    for (std::size_t k = 0; k < rep.cor.size(); ++k) {
        if (rep.cor.n[k] < rep.window.lo || rep.cor.n[k] > rep.window.hi) continue;
        rep.max_equality_gap =
            std::max(rep.max_equality_gap, std::abs(rep.integral.value[k] - rep.cor.value[k]));
        rep.max_inequality_deficit =
            std::max(rep.max_inequality_deficit, rep.bound.value[k] - rep.integral.value[k]);
    }
    rep.equality_holds = rep.max_equality_gap <= rep.slack;
    rep.inequality_holds = rep.max_inequality_deficit <= rep.slack;
    return rep;
}

}  // namespace gbt
