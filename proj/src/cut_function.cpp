#include "gbt/cut_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

// pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "gbt/errors.hpp"

namespace gbt {

namespace {

// Integer exponents dominate in practice and std::pow is slow on the hot path.
inline double power(double t, double p) {
    if (p == 1.0) return t;
    if (p == 2.0) return t * t;
    if (p == 3.0) return t * t * t;
    if (p == 4.0) {
        const double t2 = t * t;
        return t2 * t2;
    }
    return std::pow(t, p);
}

[[noreturn, gnu::noinline, gnu::cold]] void unit_error(double t, const char* what) {
    std::ostringstream os;
    os << what << ": argument " << t << " outside [0,1]";
    throw DomainError(os.str());
}

inline void check_unit(double t, const char* what) {
    if (!(t >= 0.0 && t <= 1.0)) [[unlikely]] unit_error(t, what);
}

void check_exponent(double e, const char* name) {
    if (!(e > 0.0) || !std::isfinite(e)) {
        std::ostringstream os;
        os << "cut exponent " << name << " must be positive and finite, got " << e;
        throw PreconditionError(os.str());
    }
}

}  // namespace

std::string to_string(CutKind kind) {
    switch (kind) {
        case CutKind::Constant: return "constant";
        case CutKind::Linear: return "linear";
        case CutKind::SymmetricPower: return "sympow";
        case CutKind::AsymmetricPower: return "asympow";
        case CutKind::Custom: return "custom";
    }
    return "unknown";
}

struct CutFunction::Table {
    std::vector<double> knots;
    std::vector<double> cumulative;  // Phi at each knot
    boost::math::interpolators::pchip<std::vector<double>> interp;

    Table(std::vector<double> t, std::vector<double> v)
        : knots(t), interp(std::move(t), std::move(v)) {}

    double value(double t) const { return std::clamp(interp(t), 0.0, 1.0); }

    double integrate(double lo, double hi) const {
        if (hi <= lo) return 0.0;
        // callers stay inside one knot interval, where the interpolant is a
        // cubic and a 4-point Gauss rule is exact
        auto f = [this](double s) { return value(s); };
        return boost::math::quadrature::gauss<double, 4>::integrate(f, lo, hi);
    }

    double antiderivative(double t) const {
        auto it = std::upper_bound(knots.begin(), knots.end(), t);
        std::size_t k = (it == knots.begin()) ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
        if (k >= knots.size() - 1) k = knots.size() - 2;
        return cumulative[k] + integrate(knots[k], t);
    }
};

CutFunction CutFunction::constant(double c) {
    if (!(c > 0.0 && c < 1.0)) {
        throw PreconditionError("constant cut value must lie in (0,1)");
    }
    CutFunction f;
    f.kind_ = CutKind::Constant;
    f.constant_ = c;
    f.alpha_ = f.alpha_prime_ = std::numeric_limits<double>::quiet_NaN();
    f.c0_ = f.c1_ = std::numeric_limits<double>::quiet_NaN();
    f.total_ = c;
    f.symmetric_ = (c == 0.5);
    return f;
}

CutFunction CutFunction::linear() {
    CutFunction f;
    f.kind_ = CutKind::Linear;
    f.alpha_ = f.alpha_prime_ = 1.0;
    f.finish_power_family();
    return f;
}

CutFunction CutFunction::symmetric_power(double alpha) {
    check_exponent(alpha, "alpha");
    CutFunction f;
    f.kind_ = CutKind::SymmetricPower;
    f.alpha_ = f.alpha_prime_ = alpha;
    f.finish_power_family();
    return f;
}

CutFunction CutFunction::asymmetric_power(double alpha, double alpha_prime) {
    check_exponent(alpha, "alpha");
    check_exponent(alpha_prime, "alpha_prime");
    CutFunction f;
    f.kind_ = CutKind::AsymmetricPower;
    f.alpha_ = alpha;
    f.alpha_prime_ = alpha_prime;
    f.finish_power_family();
    return f;
}

void CutFunction::finish_power_family() {
    c0_ = std::exp2(alpha_ - 1.0);
    c1_ = std::exp2(alpha_prime_ - 1.0);
    // a = 1/2 - c0 2^-(alpha+1)/(alpha+1) + c1 2^-(alpha'+1)/(alpha'+1); the
    // difference is formed first so equal exponents give exactly 1/2.
    const double left = c0_ * std::exp2(-(alpha_ + 1.0)) / (alpha_ + 1.0);
    const double right = c1_ * std::exp2(-(alpha_prime_ + 1.0)) / (alpha_prime_ + 1.0);
    total_ = 0.5 + (right - left);
    symmetric_ = (alpha_ == alpha_prime_);
}

CutFunction CutFunction::custom(std::vector<double> knots, std::vector<double> values,
                                double alpha, double alpha_prime) {
    if (knots.size() != values.size() || knots.size() < 4) {
        throw PreconditionError("custom cut needs at least 4 (t, phi) pairs of equal length");
    }
    if (knots.front() != 0.0 || knots.back() != 1.0) {
        throw PreconditionError("custom cut knots must start at 0 and end at 1");
    }
    for (std::size_t k = 0; k < knots.size(); ++k) {
        if (k > 0 && !(knots[k] > knots[k - 1])) {
            throw PreconditionError("custom cut knots must be strictly increasing");
        }
        if (!(values[k] >= 0.0 && values[k] <= 1.0)) {
            throw PreconditionError("custom cut values must lie in [0,1]");
        }
        if (k > 0 && values[k] > values[k - 1]) {
            throw PreconditionError("custom cut values must be non-increasing");
        }
    }

    CutFunction f;
    f.kind_ = CutKind::Custom;
    f.alpha_ = alpha;
    f.alpha_prime_ = alpha_prime;
    f.c0_ = f.c1_ = std::numeric_limits<double>::quiet_NaN();

    auto table = std::make_shared<Table>(knots, values);
    table->cumulative.assign(knots.size(), 0.0);
    for (std::size_t k = 1; k < knots.size(); ++k) {
        table->cumulative[k] = table->cumulative[k - 1] + table->integrate(knots[k - 1], knots[k]);
    }
    f.total_ = table->cumulative.back();
    f.table_ = std::move(table);

    f.symmetric_ = true;
    for (int k = 0; k <= 1000 && f.symmetric_; ++k) {
        const double t = k / 1000.0;
        f.symmetric_ = std::abs(1.0 - f.value(t) - f.value(1.0 - t)) <= 1e-14;
    }
    return f;
}

double CutFunction::gamma() const noexcept { return std::max(alpha_, alpha_prime_); }

std::string CutFunction::label() const {
    std::ostringstream os;
    switch (kind_) {
        case CutKind::Constant: os << "constant(" << constant_ << ")"; break;
        case CutKind::Linear: os << "linear"; break;
        case CutKind::SymmetricPower: os << "sympow(" << alpha_ << ")"; break;
        case CutKind::AsymmetricPower: os << "asympow(" << alpha_ << "," << alpha_prime_ << ")"; break;
        case CutKind::Custom: os << "custom"; break;
    }
    return os.str();
}

double CutFunction::value(double t) const {
    check_unit(t, "cut value");
    switch (kind_) {
        case CutKind::Constant: return constant_;
        case CutKind::Custom: return table_->value(t);
        default:
            if (t <= 0.5) return 1.0 - c0_ * power(t, alpha_);
            return c1_ * power(1.0 - t, alpha_prime_);
    }
}

double CutFunction::complement(double t) const {
    check_unit(t, "cut complement");
    switch (kind_) {
        case CutKind::Constant: return 1.0 - constant_;
        case CutKind::Custom: return 1.0 - table_->value(t);
        default:
            if (t <= 0.5) return c0_ * power(t, alpha_);
            return 1.0 - c1_ * power(1.0 - t, alpha_prime_);
    }
}

double CutFunction::integral(double t) const {
    check_unit(t, "cut integral");
    switch (kind_) {
        case CutKind::Constant: return constant_ * t;
        case CutKind::Custom: return t == 1.0 ? total_ : table_->antiderivative(t);
        default:
            if (t <= 0.5) return t - c0_ * power(t, alpha_ + 1.0) / (alpha_ + 1.0);
            return total_ - c1_ * power(1.0 - t, alpha_prime_ + 1.0) / (alpha_prime_ + 1.0);
    }
}

CutDerivative CutFunction::derivative(double t) const {
    check_unit(t, "cut derivative");
    switch (kind_) {
        case CutKind::Constant: return {0.0, false};
        case CutKind::Custom: return {table_->interp.prime(t), false};
        default: break;
    }
    if (t == 0.0 && alpha_ < 1.0) {
        throw DomainError("cut derivative diverges at t = 0 for alpha < 1");
    }
    if (t == 1.0 && alpha_prime_ < 1.0) {
        throw DomainError("cut derivative diverges at t = 1 for alpha' < 1");
    }
    const double left = (t <= 0.5) ? -alpha_ * c0_ * power(t, alpha_ - 1.0) : 0.0;
    if (t < 0.5) return {left, false};
    const double right = -alpha_prime_ * c1_ * power(1.0 - t, alpha_prime_ - 1.0);
    if (t > 0.5) return {right, false};
    // Both one-sided derivatives at 1/2 equal -alpha and -alpha' respectively.
    return {left, alpha_ != alpha_prime_};
}

double CutFunction::gap_integral(double u) const {
    check_unit(u, "gap integral");
    switch (kind_) {
        case CutKind::Constant: return (1.0 - constant_) * u;
        case CutKind::Custom: return u - integral(u);
        default:
            if (u <= 0.5) return c0_ * power(u, alpha_ + 1.0) / (alpha_ + 1.0);
            return (u - total_) + c1_ * power(1.0 - u, alpha_prime_ + 1.0) / (alpha_prime_ + 1.0);
    }
}

double CutFunction::tail_integral(double s) const {
    check_unit(s, "tail integral");
    switch (kind_) {
        case CutKind::Constant: return constant_ * s;
        case CutKind::Custom: return total_ - integral(1.0 - s);
        default:
            if (s <= 0.5) return c1_ * power(s, alpha_prime_ + 1.0) / (alpha_prime_ + 1.0);
            return total_ - integral(1.0 - s);
    }
}

CutFunction make_asymmetric_power(double alpha, double alpha_prime) {
    return CutFunction::asymmetric_power(alpha, alpha_prime);
}

CutFunction make_cut(const std::string& kind, double alpha, double alpha_prime, double constant) {
    if (kind == "constant") return CutFunction::constant(constant);
    if (kind == "linear") return CutFunction::linear();
    if (kind == "sympow") return CutFunction::symmetric_power(alpha);
    if (kind == "asympow") return CutFunction::asymmetric_power(alpha, alpha_prime);
    if (kind == "custom") {
        throw PreconditionError("custom cut needs a table; use CutFunction::custom");
    }
    throw PreconditionError("unknown cut kind '" + kind + "'");
}

}  // namespace gbt
