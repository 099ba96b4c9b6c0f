#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmcf/field.hpp"

namespace hmcf {

struct RegularizationParams {
    double epsilon = 1.0;  // Heaviside transition width
    double alpha = 0.2;    // edge-gate transition width

    bool operator==(const RegularizationParams&) const = default;
};

// H_eps(phi) = (1/2)(1 + (2/pi) atan(phi/eps))
inline double heaviside_eps(double phi, double eps) {
    return 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan(phi / eps));
}

// delta_eps(phi) = (1/pi) eps / (eps^2 + phi^2), the derivative of H_eps.
inline double dirac_eps(double phi, double eps) {
    return (1.0 / std::numbers::pi) * eps / (eps * eps + phi * phi);
}

inline ScalarField heaviside_eps(const ScalarField& phi, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("heaviside_eps: eps must be positive");
    ScalarField out(phi.grid);
    for (std::size_t i = 0; i < phi.v.size(); ++i) out.v[i] = heaviside_eps(phi.v[i], eps);
    return out;
}

inline ScalarField dirac_eps(const ScalarField& phi, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("dirac_eps: eps must be positive");
    ScalarField out(phi.grid);
    for (std::size_t i = 0; i < phi.v.size(); ++i) out.v[i] = dirac_eps(phi.v[i], eps);
    return out;
}

// H_alpha(g) = (1/2)(1 + (2/pi) atan((g - n)/alpha)), the edge-gating step.
inline double heaviside_alpha(double g, double n, double alpha) {
    return 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan((g - n) / alpha));
}

inline ScalarField heaviside_alpha(const ScalarField& g, double n, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("heaviside_alpha: alpha must be positive");
    ScalarField out(g.grid);
    for (std::size_t i = 0; i < g.v.size(); ++i) out.v[i] = heaviside_alpha(g.v[i], n, alpha);
    return out;
}

}  // namespace hmcf
