#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "hmcf/field.hpp"
#include "hmcf/sdf.hpp"
#include "hmcf/stencil.hpp"

namespace hmcf {

// First-order system W = [Z, phi]: Z carries d(phi)/dt.
struct WaveState {
    ScalarField z;
    ScalarField phi;
};

struct WaveParams {
    double b = 1.0;                      // scalar curvature coefficient (used when b_field is empty)
    std::optional<ScalarField> b_field;  // spatially varying coefficient b(x,y) >= 0
    double tau = 0.1;                    // outer interval length
    int substeps = 0;                    // L; 0 requests the stability-derived default
    double eta = 0.7;                    // velocity-averaging weight in [0.5, 1]

    bool operator==(const WaveParams&) const = default;
};

inline double max_wave_coefficient(const WaveParams& p) {
    if (!p.b_field) return p.b;
    double m = 0.0;
    for (double v : p.b_field->v) m = std::max(m, v);
    return m;
}

// Stability bound sqrt(max b) * (tau/L) <= 0.6; returns the resolved substep count.
inline int resolve_substeps(const WaveParams& p) {
    if (!(p.tau > 0.0)) throw std::invalid_argument("WaveParams: tau must be positive");
    if (!(p.eta >= 0.5 && p.eta <= 1.0))
        throw std::invalid_argument("WaveParams: eta must lie in [0.5, 1]");
    if (!p.b_field && !(p.b > 0.0)) throw std::invalid_argument("WaveParams: b must be positive");
    if (p.b_field)
        for (double v : p.b_field->v)
            if (!(v >= 0.0)) throw std::invalid_argument("WaveParams: b(x,y) must be non-negative");

    const double root_b = std::sqrt(max_wave_coefficient(p));
    int L = p.substeps;
    if (L <= 0) L = std::max(1, int(std::ceil(root_b * p.tau / 0.6)));
    const double cfl = root_b * p.tau / L;
    if (cfl > 0.6 + 1e-12) {
        std::ostringstream msg;
        msg << "WaveParams: stability bound violated, sqrt(b)*tau_hat = " << cfl << " > 0.6";
        throw std::invalid_argument(msg.str());
    }
    return L;
}

namespace detail {

inline ScalarField apply_wave_operator(const ScalarField& f, const WaveParams& p) {
    return p.b_field ? nine_point_laplacian(f, *p.b_field) : nine_point_laplacian(f, p.b);
}

}  // namespace detail

// One substep of the weighted four-stage scheme:
//   Z*   = Z + (t/2) D phi + (t^2/4) D Z
//   phi* = phi + (t/2)(eta Z + (1-eta) Z*) + (t^2/4) D phi
//   W+   = (1/3)(W + 2 W*) + (t/3) L W + (t/3) L W* + (t^2/6) L^2 W*
// with L = [[0, D], [1, 0]]. At eta = 1 the step matrix is the degree-4 Taylor
// polynomial of exp(t L); eta < 1 trades formal order for dissipation.
inline WaveState rk4_weighted_step(const WaveState& w, const WaveParams& p, double t) {
    const double eta = p.eta;
    const ScalarField d_phi = detail::apply_wave_operator(w.phi, p);
    const ScalarField d_z = detail::apply_wave_operator(w.z, p);

    ScalarField z_star(w.z.grid), phi_star(w.phi.grid);
    for (std::size_t i = 0; i < w.z.v.size(); ++i) {
        z_star.v[i] = w.z.v[i] + 0.5 * t * d_phi.v[i] + 0.25 * t * t * d_z.v[i];
        phi_star.v[i] = w.phi.v[i] + 0.5 * t * (eta * w.z.v[i] + (1.0 - eta) * z_star.v[i]) +
                        0.25 * t * t * d_phi.v[i];
    }

    const ScalarField d_phi_star = detail::apply_wave_operator(phi_star, p);
    const ScalarField d_z_star = detail::apply_wave_operator(z_star, p);

    WaveState out{ScalarField(w.z.grid), ScalarField(w.phi.grid)};
    const double third = 1.0 / 3.0;
    for (std::size_t i = 0; i < w.z.v.size(); ++i) {
        out.z.v[i] = third * w.z.v[i] + 2.0 * third * z_star.v[i] + third * t * d_phi.v[i] +
                     third * t * d_phi_star.v[i] + t * t / 6.0 * d_z_star.v[i];
        out.phi.v[i] = third * w.phi.v[i] + 2.0 * third * phi_star.v[i] + third * t * w.z.v[i] +
                       third * t * z_star.v[i] + t * t / 6.0 * d_phi_star.v[i];
    }
    return out;
}

// Integrate the wave system over [0, tau): phi(0) = phi0, d(phi)/dt(0) = v0.
inline WaveState evolve_wave(const LevelSetState& phi0, const ScalarField& v0, const WaveParams& p) {
    require_same_grid(phi0.phi, v0, "evolve_wave");
    const int L = resolve_substeps(p);
    const double t = p.tau / L;
    WaveState w{v0, phi0.phi};
    for (int l = 0; l < L; ++l) w = rk4_weighted_step(w, p, t);
    return w;
}

}  // namespace hmcf
