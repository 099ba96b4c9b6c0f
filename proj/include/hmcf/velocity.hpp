#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "hmcf/field.hpp"
#include "hmcf/gaussian.hpp"
#include "hmcf/image.hpp"
#include "hmcf/regularized.hpp"
#include "hmcf/sdf.hpp"
#include "hmcf/stencil.hpp"

namespace hmcf {

struct ModelParams {
    double lambda = 1.0;      // region data weight
    double mu = 0.0;          // curvature weight of the parabolic baseline
    double gamma = 0.0;       // distance-regularization weight
    double u = 0.0;           // balloon propagation constant
    double sigma = 3.0;       // local pre-fit kernel scale
    double n_threshold = 0.5; // edge gate threshold on the normalized g
    int window = 0;           // pre-fit window; 0 derives ceil(6*sigma) rounded up to odd

    bool operator==(const ModelParams&) const = default;
};

struct EdgeParams {
    double sigma_g = 1.5;     // pre-smoothing scale of the gradient detector
    double amplitude = 100.0; // Psi amplitude A
    double exponent = 2.0;    // Psi exponent

    bool operator==(const EdgeParams&) const = default;
};

// Local pre-fit functions and their pointwise fitting energies.
struct PrefitFunctions {
    ScalarField f_s, f_l;
    ScalarField e_s, e_l;
};

// g = 1 / (1 + Psi(|grad G_sigma * I|)), Psi(s) = A (s/s_max)^p, then rescaled
// so max g = 1. A constant image yields g identically 1.
inline ScalarField edge_stopping_g(const Image& image, const EdgeParams& ep = {}) {
    const ScalarField smooth = gaussian_convolve(image.intensity, ep.sigma_g);
    const ScalarField s = gradient_magnitude(smooth);
    double s_max = 0.0;
    for (double v : s.v) s_max = std::max(s_max, v);

    ScalarField g(s.grid, 1.0);
    if (s_max > 0.0) {
        for (std::size_t i = 0; i < g.v.size(); ++i)
            g.v[i] = 1.0 / (1.0 + ep.amplitude * std::pow(s.v[i] / s_max, ep.exponent));
        double g_max = 0.0;
        for (double v : g.v) g_max = std::max(g_max, v);
        for (double& v : g.v) v /= g_max;
    }
    return g;
}

// b(x,y) = b * H_alpha(g): wave diffusion gated off near strong edges.
inline ScalarField dual_mode_coefficient(double b, const ScalarField& g, double n, double alpha) {
    if (!(b > 0.0)) throw std::invalid_argument("dual_mode_coefficient: b must be positive");
    ScalarField out = heaviside_alpha(g, n, alpha);
    for (double& v : out.v) v *= b;
    return out;
}

// v0 = g*u + <grad g, grad phi>
inline ScalarField gac_velocity(const LevelSetState& phi, const ScalarField& g, double u) {
    require_same_grid(phi.phi, g, "gac_velocity");
    const ScalarField gx = grad_x(g), gy = grad_y(g);
    const ScalarField px = grad_x(phi.phi), py = grad_y(phi.phi);
    ScalarField v(g.grid);
    for (std::size_t i = 0; i < v.v.size(); ++i)
        v.v[i] = g.v[i] * u + gx.v[i] * px.v[i] + gy.v[i] * py.v[i];
    return v;
}

struct CvMeans {
    double c1 = 0.0, c2 = 0.0;
    bool c1_degenerate = false, c2_degenerate = false;
};

// Region means weighted by H_eps(phi) and 1 - H_eps(phi). A side whose weight
// sum falls to 1e-12 is degenerate and reports the global mean instead.
inline CvMeans cv_means(const Image& image, const LevelSetState& phi, double eps) {
    require_same_grid(image.intensity, phi.phi, "cv_means");
    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < phi.phi.v.size(); ++i) {
        const double hw = heaviside_eps(phi.phi.v[i], eps);
        num1 += image.intensity.v[i] * hw;
        den1 += hw;
        num2 += image.intensity.v[i] * (1.0 - hw);
        den2 += 1.0 - hw;
    }
    CvMeans m;
    m.c1_degenerate = den1 <= 1e-12;
    m.c2_degenerate = den2 <= 1e-12;
    const double global = image_mean(image);
    m.c1 = m.c1_degenerate ? global : num1 / den1;
    m.c2 = m.c2_degenerate ? global : num2 / den2;
    return m;
}

// v0 = delta_eps(phi) * lambda * ((I - c2)^2 - (I - c1)^2)
inline ScalarField cv_velocity(const Image& image, const LevelSetState& phi, double c1, double c2,
                               double lambda, double eps) {
    require_same_grid(image.intensity, phi.phi, "cv_velocity");
    ScalarField v(phi.phi.grid);
    for (std::size_t i = 0; i < v.v.size(); ++i) {
        const double I = image.intensity.v[i];
        v.v[i] = dirac_eps(phi.phi.v[i], eps) * lambda * ((I - c2) * (I - c2) - (I - c1) * (I - c1));
    }
    return v;
}

struct MultiphaseMeans {
    std::array<double, 4> c{};           // regions (in,in), (in,out), (out,in), (out,out)
    std::array<bool, 4> degenerate{};
};

inline MultiphaseMeans multiphase_means(const Image& image, const LevelSetState& phi1,
                                        const LevelSetState& phi2, double eps) {
    require_same_grid(image.intensity, phi1.phi, "multiphase_means");
    require_same_grid(image.intensity, phi2.phi, "multiphase_means");
    std::array<double, 4> num{}, den{};
    for (std::size_t i = 0; i < phi1.phi.v.size(); ++i) {
        const double h1 = heaviside_eps(phi1.phi.v[i], eps);
        const double h2 = heaviside_eps(phi2.phi.v[i], eps);
        const std::array<double, 4> w{h1 * h2, h1 * (1.0 - h2), (1.0 - h1) * h2,
                                      (1.0 - h1) * (1.0 - h2)};
        for (int r = 0; r < 4; ++r) {
            num[r] += image.intensity.v[i] * w[r];
            den[r] += w[r];
        }
    }
    MultiphaseMeans m;
    const double global = image_mean(image);
    for (int r = 0; r < 4; ++r) {
        m.degenerate[r] = den[r] <= 1e-12;
        m.c[r] = m.degenerate[r] ? global : num[r] / den[r];
    }
    return m;
}

// Coupled gradient-descent velocities for the four-phase model:
//   v1 = delta(phi1) { lambda [(I-c3)^2 - (I-c1)^2] H(phi2) + lambda [(I-c4)^2 - (I-c2)^2] (1 - H(phi2)) }
//   v2 = delta(phi2) { lambda [(I-c2)^2 - (I-c1)^2] H(phi1) + lambda [(I-c4)^2 - (I-c3)^2] (1 - H(phi1)) }
inline std::pair<ScalarField, ScalarField> multiphase_velocities(const Image& image,
                                                                 const LevelSetState& phi1,
                                                                 const LevelSetState& phi2,
                                                                 const MultiphaseMeans& m,
                                                                 double lambda, double eps) {
    ScalarField v1(phi1.phi.grid), v2(phi2.phi.grid);
    const auto& c = m.c;
    for (std::size_t i = 0; i < v1.v.size(); ++i) {
        const double I = image.intensity.v[i];
        const double h1 = heaviside_eps(phi1.phi.v[i], eps);
        const double h2 = heaviside_eps(phi2.phi.v[i], eps);
        const auto sq = [](double d) { return d * d; };
        v1.v[i] = dirac_eps(phi1.phi.v[i], eps) *
                  (lambda * (sq(I - c[2]) - sq(I - c[0])) * h2 +
                   lambda * (sq(I - c[3]) - sq(I - c[1])) * (1.0 - h2));
        v2.v[i] = dirac_eps(phi2.phi.v[i], eps) *
                  (lambda * (sq(I - c[1]) - sq(I - c[0])) * h1 +
                   lambda * (sq(I - c[3]) - sq(I - c[2])) * (1.0 - h1));
    }
    return {v1, v2};
}

inline int prefit_window(const ModelParams& mp) {
    int w = mp.window;
    if (w <= 0) {
        w = int(std::ceil(6.0 * mp.sigma));
        if (w % 2 == 0) ++w;
    }
    if (w < 3 || w % 2 == 0)
        throw std::invalid_argument("lpf_prefit: window must be odd and at least 3");
    return w;
}

// Fixed local pre-fits: per pixel, the means of window intensities at or below
// (f_s) and above (f_l) the window mean; f_l falls back to f_s in flat windows.
inline PrefitFunctions lpf_prefit(const Image& image, double sigma, int window) {
    ModelParams mp;
    mp.sigma = sigma;
    mp.window = window;
    const int w = prefit_window(mp);
    const int r = w / 2;
    const ScalarField& I = image.intensity;

    PrefitFunctions p;
    p.f_s = ScalarField(I.grid);
    p.f_l = ScalarField(I.grid);
    for (int y = 0; y < I.height(); ++y)
        for (int x = 0; x < I.width(); ++x) {
            const int x0 = std::max(0, x - r), x1 = std::min(I.width() - 1, x + r);
            const int y0 = std::max(0, y - r), y1 = std::min(I.height() - 1, y + r);
            double sum = 0.0;
            int n = 0;
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) {
                    sum += I.at(xx, yy);
                    ++n;
                }
            const double mean = sum / n;
            double s_sum = 0.0, l_sum = 0.0;
            int s_n = 0, l_n = 0;
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) {
                    const double v = I.at(xx, yy);
                    if (v <= mean) {
                        s_sum += v;
                        ++s_n;
                    } else {
                        l_sum += v;
                        ++l_n;
                    }
                }
            p.f_s.at(x, y) = s_n > 0 ? s_sum / s_n : mean;
            p.f_l.at(x, y) = l_n > 0 ? l_sum / l_n : p.f_s.at(x, y);
        }
    return p;
}

// e_s(x) = sum_y K_sigma(y - x) (I(x) - f_s(y))^2, expanded into three
// convolutions: I^2 - 2 I (K * f_s) + K * f_s^2; likewise e_l.
inline void lpf_energies(const Image& image, PrefitFunctions& p, double sigma) {
    const ScalarField& I = image.intensity;
    auto energy = [&](const ScalarField& f) {
        ScalarField f2(f.grid);
        for (std::size_t i = 0; i < f.v.size(); ++i) f2.v[i] = f.v[i] * f.v[i];
        const ScalarField kf = gaussian_convolve(f, sigma);
        const ScalarField kf2 = gaussian_convolve(f2, sigma);
        ScalarField e(f.grid);
        for (std::size_t i = 0; i < e.v.size(); ++i)
            e.v[i] = std::max(0.0, I.v[i] * I.v[i] - 2.0 * I.v[i] * kf.v[i] + kf2.v[i]);
        return e;
    };
    p.e_s = energy(p.f_s);
    p.e_l = energy(p.f_l);
}

// v0 = delta_eps(phi) * (e_l - e_s)
inline ScalarField lpf_velocity(const LevelSetState& phi, const ScalarField& e_s,
                                const ScalarField& e_l, double eps) {
    require_same_grid(phi.phi, e_s, "lpf_velocity");
    ScalarField v(phi.phi.grid);
    for (std::size_t i = 0; i < v.v.size(); ++i)
        v.v[i] = dirac_eps(phi.phi.v[i], eps) * (e_l.v[i] - e_s.v[i]);
    return v;
}

// gamma * (lap phi - div(grad phi / |grad phi|)); vanishes on a true SDF.
inline ScalarField distance_regularization(const ScalarField& phi, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("distance_regularization: gamma must be >= 0");
    ScalarField out(phi.grid);
    if (gamma == 0.0) return out;
    const ScalarField lap = nine_point_laplacian(phi, 1.0);
    const ScalarField k = curvature(phi);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = gamma * (lap.v[i] + k.v[i]);
    return out;
}

}  // namespace hmcf
