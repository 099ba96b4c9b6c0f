#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmcf/engine.hpp"
#include "hmcf/noise.hpp"
#include "hmcf/synthetic.hpp"

namespace hmcf {

struct BenchRow {
    std::string experiment;
    std::string model;
    std::string noise_kind = "none";
    double noise_strength = 0.0;
    double b = 0.0;
    double mu = 0.0;
    double dice = 0.0;
    double hausdorff = 0.0;
    int iterations = 0;
    bool converged = false;
    double runtime_ms = 0.0;
};

inline std::string bench_csv_header() {
    return "experiment,model,noise_kind,noise_strength,b,mu,dice,hausdorff,iterations,converged,"
           "runtime_ms";
}

inline std::string bench_csv_row(const BenchRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d,%.10g",
                  r.experiment.c_str(), r.model.c_str(), r.noise_kind.c_str(), r.noise_strength,
                  r.b, r.mu, r.dice, r.hausdorff, r.iterations, r.converged ? 1 : 0, r.runtime_ms);
    return buf;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows, bool zero_runtime = false) {
    std::string out = bench_csv_header() + "\n";
    for (BenchRow r : rows) {
        if (zero_runtime) r.runtime_ms = 0.0;
        out += bench_csv_row(r) + "\n";
    }
    return out;
}

inline std::string history_csv(const std::vector<IterationRecord>& history) {
    std::string out = "iter,changed_fraction,components,holes,c1,c2,c3,c4,max_v,contour_delta\n";
    char buf[512];
    for (const IterationRecord& r : history) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      r.iter, r.changed_fraction, r.components, r.holes, r.c[0], r.c[1], r.c[2],
                      r.c[3], r.max_v, r.contour_delta);
        out += buf;
    }
    return out;
}

// Contour of a binary mask: zero level set of the +-1 indicator field
// (points land on the half-way grid-edge midpoints of the mask boundary).
inline ContourPointSet mask_contour(const BinaryMask& mask) {
    ScalarField ind(mask.grid);
    for (std::size_t i = 0; i < ind.v.size(); ++i) ind.v[i] = mask.bits[i] ? 1.0 : -1.0;
    return zero_contour_points(ind);
}

namespace detail {

inline double deviation_or_sentinel(const ScalarField& phi, const ContourPointSet& truth,
                                    const Grid2D& grid) {
    const ContourPointSet c = zero_contour_points(phi);
    if (c.points.empty()) return std::hypot(double(grid.width), double(grid.height));
    return modified_hausdorff(c, truth);
}

template <typename F>
inline double timed_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace detail

// Noise robustness table: the synthetic disk under each noise kind, segmented
// by the wave model and the parabolic baseline with per-kind coefficients.
inline std::vector<BenchRow> run_noise_benchmark(const RunConfig& base) {
    const BenchParams& bp = base.bench;
    const Grid2D grid(bp.grid, bp.grid);
    auto [clean, truth] = make_synthetic(SyntheticKind::disk, grid);
    const ContourPointSet truth_contour = mask_contour(truth);

    RunConfig cfg = base;
    if (!cfg.init.circle)
        cfg.init.circle = CircleSpec{grid.width / 2.0, grid.height / 2.0, 0.3 * grid.width};
    cfg.init.mask_field.reset();
    if (bp.max_iters > 0) cfg.max_iters = bp.max_iters;

    const NoiseKind kinds[4] = {NoiseKind::gaussian, NoiseKind::salt_pepper, NoiseKind::speckle,
                                NoiseKind::periodic};
    std::vector<BenchRow> rows;
    for (int ki = 0; ki < 4; ++ki) {
        const Image noisy = apply_noise(clean, NoiseSpec{kinds[ki], bp.strength[ki], base.seed});
        for (const bool parabolic : {false, true}) {
            RunConfig run = cfg;
            run.model = parabolic ? ModelKind::pmcf_cv_baseline : ModelKind::hmcf_cv;
            if (parabolic)
                run.modelp.mu = bp.pmcf_mu[ki];
            else
                run.wave.b = bp.hmcf_b[ki];

            SegmentationResult res;
            const double ms = detail::timed_ms([&] {
                res = parabolic ? segment_pmcf_baseline(noisy, run) : segment(noisy, run);
            });

            BenchRow row;
            row.experiment = "bench-noise";
            row.model = model_kind_name(run.model);
            row.noise_kind = noise_kind_name(kinds[ki]);
            row.noise_strength = bp.strength[ki];
            row.b = parabolic ? 0.0 : run.wave.b;
            row.mu = parabolic ? run.modelp.mu : 0.0;
            row.dice = dice(threshold_mask(res.final_phi.phi), truth);
            row.hausdorff = detail::deviation_or_sentinel(res.final_phi.phi, truth_contour, grid);
            row.iterations = res.iterations;
            row.converged = res.converged;
            row.runtime_ms = ms;
            rows.push_back(row);
        }
    }
    return rows;
}

// Deviation sweep: one segmentation per swept value (b for the wave model,
// mu for the parabolic baseline), deviation measured against ground truth.
inline std::vector<BenchRow> run_b_sweep(const Image& image, const BinaryMask& truth,
                                         const std::vector<double>& values, const RunConfig& base) {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] >= values[i - 1]))
            throw std::invalid_argument("run_b_sweep: swept values must be sorted ascending");
    const bool parabolic = base.model == ModelKind::pmcf_cv_baseline;
    const ContourPointSet truth_contour = mask_contour(truth);

    std::vector<BenchRow> rows;
    for (double value : values) {
        RunConfig run = base;
        if (parabolic)
            run.modelp.mu = value;
        else
            run.wave.b = value;

        SegmentationResult res;
        const double ms = detail::timed_ms([&] {
            res = parabolic ? segment_pmcf_baseline(image, run) : segment(image, run);
        });

        BenchRow row;
        row.experiment = "sweep-b";
        row.model = model_kind_name(run.model);
        row.b = parabolic ? 0.0 : value;
        row.mu = parabolic ? value : 0.0;
        row.dice = dice(threshold_mask(res.final_phi.phi), truth);
        row.hausdorff =
            detail::deviation_or_sentinel(res.final_phi.phi, truth_contour, image.intensity.grid);
        row.iterations = res.iterations;
        row.converged = res.converged;
        row.runtime_ms = ms;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hmcf
