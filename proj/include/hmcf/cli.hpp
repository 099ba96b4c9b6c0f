#pragma once

// Command-line surface. cli_main takes plain argv strings so tests can drive
// it without spawning processes. Exit codes: 0 success, 1 usage, 2 data or
// configuration error, 3 numerical failure (contour vanished before
// convergence).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmcf/bench.hpp"
#include "hmcf/config.hpp"
#include "hmcf/io.hpp"

namespace hmcf {

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<double> parse_value_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        const char* p = t.c_str();
        char* end = nullptr;
        const double x = std::strtod(p, &end);
        if (t.empty() || end == p || *end != '\0')
            throw std::runtime_error("bad value in list: '" + item + "'");
        out.push_back(x);
    }
    if (out.empty()) throw std::runtime_error("empty value list");
    return out;
}

inline RunConfig load_run_config(const std::string& path) {
    RunConfig cfg = parse_config(path);
    if (!cfg.init.mask_path.empty()) cfg.init.mask_field = load_image(cfg.init.mask_path).intensity;
    return cfg;
}

inline int run_segment(const std::string& image_path, const std::string& cfg_path,
                       const std::string& prefix) {
    const Image image = load_image(image_path);
    const RunConfig cfg = load_run_config(cfg_path);

    if (cfg.model == ModelKind::hmcf_multiphase_cv) {
        auto [r1, r2] = segment_multiphase(image, cfg);
        save_overlay(image, r1.final_phi.phi, prefix + "_overlay.ppm", {}, &r2.final_phi.phi);
        save_field(r1.final_phi.phi, prefix + "_phi.txt");
        save_field(r2.final_phi.phi, prefix + "_phi2.txt");
        write_text(prefix + "_history.csv", history_csv(r1.history));
        write_text(prefix + "_history2.csv", history_csv(r2.history));
        const bool vanished = r1.vanished || r2.vanished;
        const bool converged = r1.converged && r2.converged;
        return (vanished && !converged && !cfg.allow_vanish) ? 3 : 0;
    }

    const SegmentationResult res = cfg.model == ModelKind::pmcf_cv_baseline
                                       ? segment_pmcf_baseline(image, cfg)
                                       : segment(image, cfg);
    save_overlay(image, res.final_phi.phi, prefix + "_overlay.ppm");
    save_field(res.final_phi.phi, prefix + "_phi.txt");
    write_text(prefix + "_history.csv", history_csv(res.history));
    return (res.vanished && !res.converged && !cfg.allow_vanish) ? 3 : 0;
}

inline int run_demo(const std::string& shape, double b, double tau, int iters, int every,
                    const std::string& prefix) {
    const Grid2D grid(128, 128);
    auto [image, mask] = make_synthetic(synthetic_kind_from_string(shape), grid);

    ScalarField ind(grid);
    for (std::size_t i = 0; i < ind.v.size(); ++i) ind.v[i] = mask.bits[i] ? 1.0 : -1.0;
    LevelSetState state = reinitialize_sdf(LevelSetState{ind, false});

    WaveParams wp;
    wp.b = b;
    wp.tau = tau;
    const ScalarField zero(grid);

    char name[32];
    int snap = 0;
    auto snapshot = [&] {
        std::snprintf(name, sizeof name, "_%03d.ppm", snap++);
        save_overlay(image, state.phi, prefix + name);
    };
    try {
        for (int k = 0; k < iters; ++k) {
            if (k % every == 0) snapshot();
            state.phi = evolve_wave(state, zero, wp).phi;
            state.is_sdf = false;
            state = reinitialize_sdf(state);
        }
    } catch (const contour_vanished&) {
        std::cerr << "demo: contour vanished before the requested iterations\n";
        return 3;
    }
    snapshot();
    return 0;
}

}  // namespace detail

inline int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"hmcf: active contour segmentation by hyperbolic mean curvature flow"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string image_path, cfg_path, prefix = "out", out_path, truth_path, b_list, shape;
    bool zero_runtime = false;
    double demo_b = 1.0, demo_tau = 1.0;
    int demo_iters = 120, demo_every = 20;
    int rc = 0;

    CLI::App* seg = app.add_subcommand("segment", "Segment an image with the configured model");
    seg->add_option("image", image_path, "input image (PGM P2/P5)")->required();
    seg->add_option("--config", cfg_path, "run configuration file")->required();
    seg->add_option("--out-prefix", prefix, "output prefix for overlay/field/history files");
    seg->callback([&] { rc = detail::run_segment(image_path, cfg_path, prefix); });

    CLI::App* bn = app.add_subcommand("bench-noise", "Noise-robustness benchmark on the synthetic disk");
    bn->add_option("--config", cfg_path, "run configuration file")->required();
    bn->add_option("--out", out_path, "output CSV path")->required();
    bn->add_flag("--zero-runtime", zero_runtime, "write runtime_ms as 0 for reproducible output");
    bn->callback([&] {
        const RunConfig cfg = detail::load_run_config(cfg_path);
        detail::write_text(out_path, bench_csv(run_noise_benchmark(cfg), zero_runtime));
    });

    CLI::App* sw = app.add_subcommand("sweep-b", "Sweep b (or mu for the parabolic baseline)");
    sw->add_option("image", image_path, "input image (PGM P2/P5)")->required();
    sw->add_option("--config", cfg_path, "run configuration file")->required();
    sw->add_option("--b-list", b_list, "comma-separated ascending values")->required();
    sw->add_option("--truth", truth_path, "ground-truth mask (PGM, thresholded at 0.5)")->required();
    sw->add_option("--out", out_path, "output CSV path")->required();
    sw->add_flag("--zero-runtime", zero_runtime, "write runtime_ms as 0 for reproducible output");
    sw->callback([&] {
        const Image image = load_image(image_path);
        const BinaryMask truth = load_mask(truth_path);
        const RunConfig cfg = detail::load_run_config(cfg_path);
        const std::vector<double> values = detail::parse_value_list(b_list);
        detail::write_text(out_path, bench_csv(run_b_sweep(image, truth, values, cfg), zero_runtime));
    });

    CLI::App* dm = app.add_subcommand("demo", "Pure curvature-driven evolution with snapshots");
    dm->add_option("shape", shape, "spiral or star")->required()->check(CLI::IsMember({"spiral", "star"}));
    dm->add_option("--b", demo_b, "curvature coefficient");
    dm->add_option("--tau", demo_tau, "outer interval length per iteration");
    dm->add_option("--iters", demo_iters, "iteration count")->check(CLI::PositiveNumber);
    dm->add_option("--every", demo_every, "snapshot interval")->check(CLI::PositiveNumber);
    dm->add_option("--out-prefix", prefix, "snapshot file prefix");
    dm->callback(
        [&] { rc = detail::run_demo(shape, demo_b, demo_tau, demo_iters, demo_every, prefix); });

    CLI::App* ri = app.add_subcommand("reinit", "Reinitialize a saved field to a signed distance");
    ri->add_option("field", image_path, "input field file")->required();
    ri->add_option("--out", out_path, "output field file")->required();
    ri->callback([&] {
        const LevelSetState in{load_field(image_path), false};
        save_field(reinitialize_sdf(in).phi, out_path);
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("hmcf");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const contour_vanished& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return rc;
}

}  // namespace hmcf
