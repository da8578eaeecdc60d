#include "gbt/baker_map.hpp"

#include <sstream>

#include "gbt/errors.hpp"

namespace gbt {

Point2 BakerMap::forward(double x, double y, double& contraction) const {
    if (!(y >= 0.0 && y <= 1.0)) {
        std::ostringstream os;
        os << "baker forward: y = " << y << " outside [0,1]";
        throw DomainError(os.str());
    }
    const double fx = factor_.forward(x);
    const auto& cut = factor_.cut();
    if (x <= factor_.a()) {
        const double p = cut.value(fx);
        contraction = p;
        return {fx, p * y};
    }
    const double p = cut.value(fx);
    const double q = cut.complement(fx);
    contraction = q;
    return {fx, p + q * y};
}

Point2 BakerMap::forward(double x, double y) const {
    double unused = 0.0;
    return forward(x, y, unused);
}

Point2 BakerMap::iterate(double x, double y, std::size_t n) const {
    Point2 p{x, y};
    for (std::size_t k = 0; k < n; ++k) p = forward(p.x, p.y);
    return p;
}

Jacobian2 BakerMap::jacobian(double x, double y) const {
    const double a = factor_.a();
    if (!(x > 0.0 && x < 1.0) || x == a || !(y > 0.0 && y < 1.0)) {
        std::ostringstream os;
        os << "jacobian: (" << x << ", " << y << ") is not an interior non-cut point";
        throw DomainError(os.str());
    }
    const double fx = factor_.forward(x);
    const auto& cut = factor_.cut();
    const CutDerivative dphi = cut.derivative(fx);
    Jacobian2 J;
    J.one_sided = dphi.one_sided;
    if (x < a) {
        const double p = cut.value(fx);
        J.m[0] = {1.0 / p, 0.0};
        J.m[1] = {dphi.value * y / p, p};
    } else {
        const double q = cut.complement(fx);
        J.m[0] = {1.0 / q, 0.0};
        J.m[1] = {dphi.value * (1.0 - y) / q, q};
    }
    return J;
}

double BakerMap::fibre_contraction(double x, std::size_t n) const {
    double prod = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double fx = factor_.forward(x);
        prod *= factor_.fibre_factor(x, fx);
        x = fx;
    }
    return prod;
}

}  // namespace gbt
