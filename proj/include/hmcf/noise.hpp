#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmcf/image.hpp"

namespace hmcf {

enum class NoiseKind { gaussian, salt_pepper, speckle, periodic };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double strength = 0.0;
    std::uint64_t seed = 0;
};

inline const char* noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::salt_pepper: return "salt_pepper";
        case NoiseKind::speckle: return "speckle";
        case NoiseKind::periodic: return "periodic";
    }
    return "?";
}

namespace detail {

// Box-Muller normals on top of mt19937_64: the bit stream does not depend on
// the standard library's distribution internals.
class NormalSource {
  public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = to_unit(rng_());
        if (u1 <= 0.0) u1 = std::numeric_limits<double>::min();
        const double u2 = to_unit(rng_());
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    static double to_unit(std::uint64_t x) { return double(x >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

inline Image apply_noise(const Image& image, const NoiseSpec& spec) {
    if (!(spec.strength >= 0.0)) throw std::invalid_argument("apply_noise: strength must be >= 0");
    ScalarField out = image.intensity;
    const auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };

    switch (spec.kind) {
        case NoiseKind::gaussian: {
            detail::NormalSource normal(spec.seed);
            for (double& v : out.v) v = clamp01(v + spec.strength * normal());
            break;
        }
        case NoiseKind::salt_pepper: {
            const std::size_t n =
                std::min(out.v.size(), std::size_t(std::llround(spec.strength * double(out.v.size()))));
            std::vector<std::uint32_t> idx(out.v.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = std::uint32_t(i);
            std::mt19937_64 rng(spec.seed);
            for (std::size_t i = 0; i < n; ++i) {  // partial Fisher-Yates: first n are the picks
                const std::size_t j = i + std::size_t(rng() % (idx.size() - i));
                std::swap(idx[i], idx[j]);
                out.v[idx[i]] = (i % 2 == 0) ? 1.0 : 0.0;
            }
            break;
        }
        case NoiseKind::speckle: {
            detail::NormalSource normal(spec.seed);
            for (double& v : out.v) v = clamp01(v * (1.0 + spec.strength * normal()));
            break;
        }
        case NoiseKind::periodic: {
            const double f = 0.15;  // cycles per pixel along each axis
            for (int y = 0; y < out.height(); ++y)
                for (int x = 0; x < out.width(); ++x)
                    out.at(x, y) = clamp01(out.at(x, y) +
                                           spec.strength *
                                               std::sin(2.0 * std::numbers::pi * f * x +
                                                        2.0 * std::numbers::pi * f * y));
            break;
        }
    }
    return Image{std::move(out)};
}

}  // namespace hmcf
