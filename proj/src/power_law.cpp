#include "gbt/power_law.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/statistics/linear_regression.hpp>

#include "gbt/errors.hpp"

namespace gbt {

PowerLawFit fit_power_law(const std::vector<std::size_t>& n, const std::vector<double>& v,
                          std::size_t n_lo, std::size_t n_hi) {
    if (n.size() != v.size()) throw PreconditionError("fit_power_law: size mismatch");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (n[k] < n_lo || n[k] > n_hi || n[k] == 0) continue;
        if (!(v[k] > 0.0) || !std::isfinite(v[k])) continue;
        lx.push_back(std::log(static_cast<double>(n[k])));
        ly.push_back(std::log(v[k]));
    }
    if (lx.size() < 8) {
        std::ostringstream os;
        os << "fit_power_law: only " << lx.size() << " usable points in [" << n_lo << ", " << n_hi
           << "], need 8";
        throw PreconditionError(os.str());
    }
    const auto [c0, c1] = boost::math::statistics::simple_ordinary_least_squares(lx, ly);

    PowerLawFit fit;
    fit.exponent = c1;
    fit.intercept = c0;
    fit.n_lo = n_lo;
    fit.n_hi = n_hi;
    fit.points = lx.size();
    double ss = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - (c0 + c1 * lx[k]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(lx.size()));
    fit.poor_fit = fit.residual_rms > 0.2;
    return fit;
}

}  // namespace gbt
