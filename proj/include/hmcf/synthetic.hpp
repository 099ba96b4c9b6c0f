#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "hmcf/gaussian.hpp"
#include "hmcf/image.hpp"
#include "hmcf/metrics.hpp"

namespace hmcf {

enum class SyntheticKind { disk, quadrants, blobs, star, spiral, blurred_disk };

inline SyntheticKind synthetic_kind_from_string(const std::string& s) {
    if (s == "disk") return SyntheticKind::disk;
    if (s == "quadrants") return SyntheticKind::quadrants;
    if (s == "blobs") return SyntheticKind::blobs;
    if (s == "star") return SyntheticKind::star;
    if (s == "spiral") return SyntheticKind::spiral;
    if (s == "blurred_disk") return SyntheticKind::blurred_disk;
    throw std::invalid_argument("unknown synthetic kind: " + s);
}

// Deterministic analytic test scenes with their ground-truth masks. Shapes
// scale with the grid; the blurred variant smooths the sharp scene at sigma 2
// while keeping the sharp mask as truth.
inline std::pair<Image, BinaryMask> make_synthetic(SyntheticKind kind, const Grid2D& grid) {
    if (grid.width < 64 || grid.height < 64)
        throw std::invalid_argument("make_synthetic: grid must be at least 64x64");
    const double W = grid.width, H = grid.height;
    const double S = std::min(W, H);
    const double cx = W / 2.0, cy = H / 2.0;

    ScalarField img(grid);
    BinaryMask mask(grid);
    auto fill = [&](auto&& inside_value) {
        for (int y = 0; y < grid.height; ++y)
            for (int x = 0; x < grid.width; ++x) {
                const auto [value, in] = inside_value(double(x), double(y));
                img.at(x, y) = value;
                mask.bits[std::size_t(y) * grid.width + x] = in ? 1 : 0;
            }
    };

    switch (kind) {
        case SyntheticKind::disk: {
            const double r = W / 5.0;
            fill([&](double x, double y) {
                const bool in = (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
                return std::pair{in ? 1.0 : 0.0, in};
            });
            break;
        }
        case SyntheticKind::quadrants: {
            fill([&](double x, double y) {
                const bool right = x >= cx, bottom = y >= cy;
                const double value = right && bottom ? 1.0
                                     : !right && bottom ? 2.0 / 3.0
                                     : right ? 1.0 / 3.0
                                             : 0.0;
                return std::pair{value, right && bottom};
            });
            break;
        }
        case SyntheticKind::blobs: {
            const double ax = 0.28 * W, ay = 0.30 * H, ar = 0.11 * S;
            const double bx = 0.70 * W, by = 0.32 * H, br = 0.125 * S;
            const double ox = 0.50 * W, oy = 0.72 * H, ro = 0.14 * S, ri = 0.065 * S;
            fill([&](double x, double y) {
                const double da = std::hypot(x - ax, y - ay);
                const double db = std::hypot(x - bx, y - by);
                const double dc = std::hypot(x - ox, y - oy);
                const bool in = da < ar || db < br || (dc < ro && dc > ri);
                return std::pair{in ? 1.0 : 0.0, in};
            });
            break;
        }
        case SyntheticKind::star: {
            const double r1 = 0.21 * S, r2 = 0.09 * S;
            fill([&](double x, double y) {
                const double theta = std::atan2(y - cy, x - cx);
                const bool in = std::hypot(x - cx, y - cy) < r1 + r2 * std::cos(5.0 * theta);
                return std::pair{in ? 1.0 : 0.0, in};
            });
            break;
        }
        case SyntheticKind::spiral: {
            const double theta0 = 0.5 * std::numbers::pi;
            const double theta1 = theta0 + 6.0 * std::numbers::pi;
            const double a = 0.43 * S / theta1;
            const double halfwidth = 0.035 * S;
            fill([&](double x, double y) {
                const double r = std::hypot(x - cx, y - cy);
                double theta = std::atan2(y - cy, x - cx);
                bool in = false;
                while (theta < theta0) theta += 2.0 * std::numbers::pi;
                for (; theta <= theta1; theta += 2.0 * std::numbers::pi)
                    if (std::abs(r - a * theta) <= halfwidth) in = true;
                return std::pair{in ? 1.0 : 0.0, in};
            });
            break;
        }
        case SyntheticKind::blurred_disk: {
            auto [sharp, sharp_mask] = make_synthetic(SyntheticKind::disk, grid);
            ScalarField blurred = gaussian_convolve(sharp.intensity, 2.0);
            for (double& v : blurred.v) v = std::clamp(v, 0.0, 1.0);
            return {Image{std::move(blurred)}, std::move(sharp_mask)};
        }
    }
    return {Image{std::move(img)}, std::move(mask)};
}

}  // namespace hmcf
