#pragma once

#include <memory>
#include <string>
#include <vector>

namespace gbt {

enum class CutKind { Constant, Linear, SymmetricPower, AsymmetricPower, Custom };

std::string to_string(CutKind kind);

/// Derivative of the cut function at a point. `one_sided` is set when the
/// point is an interior junction of a piecewise kind with a genuine kink, in
/// which case `value` is the left derivative.
struct CutDerivative {
    double value = 0.0;
    bool one_sided = false;
};

/// A decreasing cut function phi : [0,1] -> [0,1] together with its
/// antiderivative Phi(t) = int_0^t phi.
///
/// The power family is
///
///     phi(t) = 1 - c0 t^alpha            for t <= 1/2
///     phi(t) = c1 (1 - t)^alpha'         for t >= 1/2
///
/// with c0 = 2^(alpha-1) and c1 = 2^(alpha'-1), which makes phi continuous at
/// 1/2 with value 1/2. Linear is alpha = alpha' = 1. Values are immutable;
/// every member function is const and safe to call concurrently.
class CutFunction {
public:
    /// phi == c. Only c = 1/2 (the classical baker) satisfies the symmetry
    /// relation; any c in (0,1) defines a valid affine map.
    static CutFunction constant(double c = 0.5);
    static CutFunction linear();
    static CutFunction symmetric_power(double alpha);
    static CutFunction asymmetric_power(double alpha, double alpha_prime);

    /// Tabulated decreasing cut function, interpolated with a monotone cubic
    /// (PCHIP). Knots must start at 0, end at 1 and be strictly increasing;
    /// values must be non-increasing inside [0,1]. The boundary exponents are
    /// informational only and may be NaN.
    static CutFunction custom(std::vector<double> knots, std::vector<double> values,
                              double alpha, double alpha_prime);

    CutKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double alpha_prime() const noexcept { return alpha_prime_; }
    double c0() const noexcept { return c0_; }
    double c1() const noexcept { return c1_; }
    bool symmetric() const noexcept { return symmetric_; }
    bool is_constant() const noexcept { return kind_ == CutKind::Constant; }

    /// max(alpha, alpha'), the exponent governing the slowest decay.
    double gamma() const noexcept;

    /// Short human-readable label, e.g. "sympow(2)".
    std::string label() const;

    double value(double t) const;
    /// 1 - phi(t), evaluated without cancellation near t = 0.
    double complement(double t) const;
    /// Phi(t) = int_0^t phi.
    double integral(double t) const;
    CutDerivative derivative(double t) const;

    /// int_0^u (1 - phi) = u - Phi(u); accurate for small u.
    double gap_integral(double u) const;
    /// int_{1-s}^1 phi = Phi(1) - Phi(1-s); accurate for small s.
    double tail_integral(double s) const;
    /// Phi(1), the abscissa of the cut.
    double total_integral() const noexcept { return total_; }

private:
    struct Table;

    CutFunction() = default;
    void finish_power_family();

    CutKind kind_ = CutKind::Linear;
    double alpha_ = 1.0;
    double alpha_prime_ = 1.0;
    double c0_ = 1.0;
    double c1_ = 1.0;
    double constant_ = 0.5;
    double total_ = 0.5;
    bool symmetric_ = true;
    std::shared_ptr<const Table> table_;
};

/// Piecewise power cut with independent exponents at the two ends.
/// (1,1) reproduces the linear cut and (a,a) the symmetric power family.
CutFunction make_asymmetric_power(double alpha, double alpha_prime);

/// Builds a cut function from a kind name ("constant", "linear", "sympow",
/// "asympow") and exponents, as found in an experiment configuration.
CutFunction make_cut(const std::string& kind, double alpha, double alpha_prime,
                     double constant = 0.5);

}  // namespace gbt
