#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmcf/components.hpp"
#include "hmcf/image.hpp"
#include "hmcf/metrics.hpp"
#include "hmcf/regularized.hpp"
#include "hmcf/sdf.hpp"
#include "hmcf/velocity.hpp"
#include "hmcf/wave.hpp"

namespace hmcf {

enum class ModelKind {
    hmcf_gac,
    hmcf_cv,
    hdrf_cv,
    hmcf_multiphase_cv,
    hmcf_lpf,
    pmcf_cv_baseline,
};

inline const char* model_kind_name(ModelKind m) {
    switch (m) {
        case ModelKind::hmcf_gac: return "hmcf-gac";
        case ModelKind::hmcf_cv: return "hmcf-cv";
        case ModelKind::hdrf_cv: return "hdrf-cv";
        case ModelKind::hmcf_multiphase_cv: return "hmcf-multiphase-cv";
        case ModelKind::hmcf_lpf: return "hmcf-lpf";
        case ModelKind::pmcf_cv_baseline: return "pmcf-cv-baseline";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "hmcf-gac") return ModelKind::hmcf_gac;
    if (s == "hmcf-cv") return ModelKind::hmcf_cv;
    if (s == "hdrf-cv") return ModelKind::hdrf_cv;
    if (s == "hmcf-multiphase-cv") return ModelKind::hmcf_multiphase_cv;
    if (s == "hmcf-lpf") return ModelKind::hmcf_lpf;
    if (s == "pmcf-cv-baseline") return ModelKind::pmcf_cv_baseline;
    throw std::invalid_argument("unknown model: " + s);
}

struct CircleSpec {
    double cx = 0.0, cy = 0.0, r = 0.0;
    bool operator==(const CircleSpec&) const = default;
};

struct InitContour {
    std::optional<CircleSpec> circle;
    std::optional<CircleSpec> circle2;      // second field of the multiphase model
    std::string mask_path;                  // config value; loaded by the CLI layer
    std::optional<ScalarField> mask_field;  // loaded mask, thresholded at 0.5

    bool operator==(const InitContour&) const = default;
};

// Noise-benchmark parameters: default strengths plus per-noise-kind tuned
// coefficients for the two compared models.
struct BenchParams {
    std::array<double, 4> strength{0.15, 0.15, 0.3, 0.3};      // gaussian, salt_pepper, speckle, periodic
    std::array<double, 4> hmcf_b{100.0, 220.0, 100.0, 20.0};
    std::array<double, 4> pmcf_mu{30.0, 120.0, 80.0, 30.0};
    int grid = 100;
    int max_iters = 0;  // 0 falls back to the run's max_iters

    bool operator==(const BenchParams&) const = default;
};

struct RunConfig {
    ModelKind model = ModelKind::hmcf_cv;
    WaveParams wave;
    ModelParams modelp;
    RegularizationParams reg;
    EdgeParams edge;
    int reinit_every = 1;
    int max_iters = 500;
    int conv_window = 5;
    double conv_threshold = 1e-3;  // fraction of cells
    InitContour init;
    std::uint64_t seed = 0;
    bool allow_vanish = false;
    double vmax = 0.0;  // clamp on |v0|; 0 derives 10/tau
    BenchParams bench;

    bool operator==(const RunConfig&) const = default;
};

inline double resolve_vmax(const RunConfig& c) {
    return c.vmax > 0.0 ? c.vmax : 10.0 / c.wave.tau;
}

struct IterationRecord {
    int iter = 0;
    double changed_fraction = 0.0;  // cells whose sign flipped this iteration
    int components = 0;
    int holes = 0;
    std::array<double, 4> c{};      // region means where applicable
    double max_v = 0.0;             // max |applied velocity|
    double contour_delta = 0.0;     // modified Hausdorff to the previous contour
};

struct SegmentationResult {
    LevelSetState final_phi;
    int iterations = 0;
    bool converged = false;
    bool vanished = false;
    std::vector<IterationRecord> history;
};

// True iff each of the last `window` changed-sign fractions is below threshold.
inline bool convergence_check(const std::vector<double>& changed, int window, double threshold) {
    if (window < 1) throw std::invalid_argument("convergence_check: window must be >= 1");
    if (int(changed.size()) < window) return false;
    for (std::size_t i = changed.size() - window; i < changed.size(); ++i)
        if (!(changed[i] < threshold)) return false;
    return true;
}

namespace detail {

inline LevelSetState initial_state(const Grid2D& grid, const InitContour& init, bool second = false) {
    if (!second && init.mask_field) {
        require_same_grid(*init.mask_field, ScalarField(grid), "initial mask");
        LevelSetState s{ScalarField(grid), false};
        for (std::size_t i = 0; i < s.phi.v.size(); ++i)
            s.phi.v[i] = init.mask_field->v[i] > 0.5 ? 1.0 : -1.0;
        return reinitialize_sdf(s);
    }
    const std::optional<CircleSpec>& c = second ? init.circle2 : init.circle;
    if (!c) throw std::invalid_argument("segment: no initial contour configured");
    return make_circle_sdf(grid, c->cx, c->cy, c->r);
}

inline double changed_fraction(const ScalarField& a, const ScalarField& b) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i)
        if ((a.v[i] > 0.0) != (b.v[i] > 0.0)) ++changed;
    return double(changed) / double(a.v.size());
}

inline void clamp_velocity(ScalarField& v, double vmax) {
    for (double& x : v.v) x = std::clamp(x, -vmax, vmax);
}

inline double max_abs(const ScalarField& v) {
    double m = 0.0;
    for (double x : v.v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

// One outer loop of the wave-driven contour evolution: velocity, wave interval,
// optional reinitialization, convergence test on sign churn.
inline SegmentationResult segment(const Image& image, const RunConfig& config) {
    const Grid2D grid = image.intensity.grid;
    LevelSetState phi = detail::initial_state(grid, config.init);
    require_same_grid(image.intensity, phi.phi, "segment");

    WaveParams wave = config.wave;
    const double eps = config.reg.epsilon;
    const double vmax = resolve_vmax(config);

    ScalarField g;  // edge-stopping function, models that need it
    PrefitFunctions prefit;
    if (config.model == ModelKind::hmcf_gac || config.model == ModelKind::hdrf_cv)
        g = edge_stopping_g(image, config.edge);
    if (config.model == ModelKind::hdrf_cv)
        wave.b_field = dual_mode_coefficient(config.wave.b, g, config.modelp.n_threshold,
                                             config.reg.alpha);
    if (config.model == ModelKind::hmcf_lpf) {
        prefit = lpf_prefit(image, config.modelp.sigma, config.modelp.window);
        lpf_energies(image, prefit, config.modelp.sigma);
    }
    resolve_substeps(wave);  // surface configuration errors before iterating

    SegmentationResult res;
    ContourPointSet prev_contour = zero_contour_points(phi.phi);
    std::vector<double> changed_hist;

    for (int k = 1; k <= config.max_iters; ++k) {
        IterationRecord rec;
        rec.iter = k;

        ScalarField v0;
        switch (config.model) {
            case ModelKind::hmcf_gac:
                v0 = gac_velocity(phi, g, config.modelp.u);
                break;
            case ModelKind::hmcf_cv:
            case ModelKind::hdrf_cv: {
                const CvMeans m = cv_means(image, phi, eps);
                rec.c = {m.c1, m.c2, 0.0, 0.0};
                v0 = cv_velocity(image, phi, m.c1, m.c2, config.modelp.lambda, eps);
                break;
            }
            case ModelKind::hmcf_lpf:
                v0 = lpf_velocity(phi, prefit.e_s, prefit.e_l, eps);
                break;
            default:
                throw std::invalid_argument("segment: model requires a dedicated entry point");
        }
        if (config.modelp.gamma > 0.0) {
            const ScalarField reg = distance_regularization(phi.phi, config.modelp.gamma);
            for (std::size_t i = 0; i < v0.v.size(); ++i) v0.v[i] += reg.v[i];
        }
        detail::clamp_velocity(v0, vmax);
        rec.max_v = detail::max_abs(v0);

        const WaveState w = evolve_wave(phi, v0, wave);
        rec.changed_fraction = detail::changed_fraction(w.phi, phi.phi);

        LevelSetState next{w.phi, false};
        bool vanished = false;
        if (config.reinit_every > 0 && k % config.reinit_every == 0) {
            try {
                next = reinitialize_sdf(next);
            } catch (const contour_vanished&) {
                vanished = true;
            }
        }

        const ContourPointSet contour = zero_contour_points(next.phi);
        if (contour.points.empty()) vanished = true;

        if (!vanished) {
            const ComponentAnalysis comp = zero_level_components(next.phi);
            rec.components = comp.component_count;
            rec.holes = comp.hole_count;
            rec.contour_delta = modified_hausdorff(contour, prev_contour);
        }
        res.history.push_back(rec);
        res.iterations = k;
        changed_hist.push_back(rec.changed_fraction);

        phi = next;
        prev_contour = contour;
        if (vanished) {
            res.vanished = true;
            break;
        }
        if (convergence_check(changed_hist, config.conv_window, config.conv_threshold)) {
            res.converged = true;
            break;
        }
    }
    res.final_phi = phi;
    return res;
}

// Explicit parabolic baseline:
//   phi += tau_p [ delta_eps(phi)(mu kappa_s + lambda ((I-c2)^2 - (I-c1)^2))
//                  + gamma (lap phi - kappa_s) ],  kappa_s = div(grad phi/|grad phi|),
// substepped so tau_p (mu + gamma) <= 0.25 h^2.
inline SegmentationResult segment_pmcf_baseline(const Image& image, const RunConfig& config) {
    const Grid2D grid = image.intensity.grid;
    LevelSetState phi = detail::initial_state(grid, config.init);
    require_same_grid(image.intensity, phi.phi, "segment_pmcf_baseline");

    const double eps = config.reg.epsilon;
    const double lambda = config.modelp.lambda;
    const double mu = config.modelp.mu;
    const double gamma = config.modelp.gamma;
    const double h = grid.spacing;
    const int substeps =
        std::max(1, int(std::ceil(config.wave.tau * (mu + gamma) / (0.25 * h * h))));
    const double tau_p = config.wave.tau / substeps;

    SegmentationResult res;
    ContourPointSet prev_contour = zero_contour_points(phi.phi);
    std::vector<double> changed_hist;

    for (int k = 1; k <= config.max_iters; ++k) {
        IterationRecord rec;
        rec.iter = k;
        const CvMeans m = cv_means(image, phi, eps);
        rec.c = {m.c1, m.c2, 0.0, 0.0};

        ScalarField work = phi.phi;
        double max_v = 0.0;
        for (int l = 0; l < substeps; ++l) {
            const ScalarField kappa_s_neg = curvature(work);  // equals -div(grad phi/|grad phi|)
            const ScalarField lap = nine_point_laplacian(work, 1.0);
            for (std::size_t i = 0; i < work.v.size(); ++i) {
                const double I = image.intensity.v[i];
                const double kappa_s = -kappa_s_neg.v[i];
                double f = dirac_eps(work.v[i], eps) *
                           (mu * kappa_s + lambda * ((I - m.c2) * (I - m.c2) - (I - m.c1) * (I - m.c1)));
                if (gamma > 0.0) f += gamma * (lap.v[i] - kappa_s);
                max_v = std::max(max_v, std::abs(f));
                work.v[i] += tau_p * f;
            }
        }
        rec.max_v = max_v;
        rec.changed_fraction = detail::changed_fraction(work, phi.phi);

        LevelSetState next{work, false};
        bool vanished = false;
        if (config.reinit_every > 0 && k % config.reinit_every == 0) {
            try {
                next = reinitialize_sdf(next);
            } catch (const contour_vanished&) {
                vanished = true;
            }
        }
        const ContourPointSet contour = zero_contour_points(next.phi);
        if (contour.points.empty()) vanished = true;
        if (!vanished) {
            const ComponentAnalysis comp = zero_level_components(next.phi);
            rec.components = comp.component_count;
            rec.holes = comp.hole_count;
            rec.contour_delta = modified_hausdorff(contour, prev_contour);
        }
        res.history.push_back(rec);
        res.iterations = k;
        changed_hist.push_back(rec.changed_fraction);

        phi = next;
        prev_contour = contour;
        if (vanished) {
            res.vanished = true;
            break;
        }
        if (convergence_check(changed_hist, config.conv_window, config.conv_threshold)) {
            res.converged = true;
            break;
        }
    }
    res.final_phi = phi;
    return res;
}

// Coupled two-field evolution; region means are computed once per outer
// iteration and both fields advance under the same wave parameters.
inline std::pair<SegmentationResult, SegmentationResult> segment_multiphase(const Image& image,
                                                                            const RunConfig& config) {
    const Grid2D grid = image.intensity.grid;
    if (!config.init.circle || !config.init.circle2)
        throw std::invalid_argument("segment_multiphase: two initial contours required");
    LevelSetState phi1 = detail::initial_state(grid, config.init, false);
    LevelSetState phi2 = detail::initial_state(grid, config.init, true);

    const double eps = config.reg.epsilon;
    const double vmax = resolve_vmax(config);
    resolve_substeps(config.wave);

    SegmentationResult r1, r2;
    ContourPointSet prev1 = zero_contour_points(phi1.phi);
    ContourPointSet prev2 = zero_contour_points(phi2.phi);
    std::vector<double> hist1, hist2;
    bool conv1 = false, conv2 = false;

    for (int k = 1; k <= config.max_iters; ++k) {
        const MultiphaseMeans m = multiphase_means(image, phi1, phi2, eps);
        auto [v1, v2] = multiphase_velocities(image, phi1, phi2, m, config.modelp.lambda, eps);
        if (config.modelp.gamma > 0.0) {
            const ScalarField reg1 = distance_regularization(phi1.phi, config.modelp.gamma);
            const ScalarField reg2 = distance_regularization(phi2.phi, config.modelp.gamma);
            for (std::size_t i = 0; i < v1.v.size(); ++i) {
                v1.v[i] += reg1.v[i];
                v2.v[i] += reg2.v[i];
            }
        }
        detail::clamp_velocity(v1, vmax);
        detail::clamp_velocity(v2, vmax);

        const WaveState w1 = evolve_wave(phi1, v1, config.wave);
        const WaveState w2 = evolve_wave(phi2, v2, config.wave);

        bool vanished = false;
        auto advance = [&](SegmentationResult& res, LevelSetState& phi, const WaveState& w,
                           ContourPointSet& prev, std::vector<double>& hist, const ScalarField& v) {
            IterationRecord rec;
            rec.iter = k;
            rec.c = m.c;
            rec.max_v = detail::max_abs(v);
            rec.changed_fraction = detail::changed_fraction(w.phi, phi.phi);
            LevelSetState next{w.phi, false};
            if (config.reinit_every > 0 && k % config.reinit_every == 0) {
                try {
                    next = reinitialize_sdf(next);
                } catch (const contour_vanished&) {
                    vanished = true;
                }
            }
            const ContourPointSet contour = zero_contour_points(next.phi);
            if (contour.points.empty())
                vanished = true;
            else {
                const ComponentAnalysis comp = zero_level_components(next.phi);
                rec.components = comp.component_count;
                rec.holes = comp.hole_count;
                rec.contour_delta = modified_hausdorff(contour, prev);
            }
            res.history.push_back(rec);
            res.iterations = k;
            hist.push_back(rec.changed_fraction);
            phi = next;
            prev = contour;
        };
        advance(r1, phi1, w1, prev1, hist1, v1);
        advance(r2, phi2, w2, prev2, hist2, v2);

        if (vanished) {
            r1.vanished = r2.vanished = true;
            break;
        }
        conv1 = convergence_check(hist1, config.conv_window, config.conv_threshold);
        conv2 = convergence_check(hist2, config.conv_window, config.conv_threshold);
        if (conv1 && conv2) {
            r1.converged = r2.converged = true;
            break;
        }
    }
    r1.final_phi = phi1;
    r2.final_phi = phi2;
    return {std::move(r1), std::move(r2)};
}

}  // namespace hmcf
