#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hmcf/field.hpp"

namespace hmcf {

// Discrete Gaussian taps truncated at +-ceil(3*sigma), renormalized to sum 1.
inline std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (double(i) / sigma) * (double(i) / sigma));
        sum += k[i + radius];
    }
    for (double& w : k) w /= sum;
    return k;
}

// Separable Gaussian convolution with edge-mirror boundary handling, which
// conserves the field sum exactly (up to rounding).
inline ScalarField gaussian_convolve(const ScalarField& f, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int radius = int(k.size() / 2);
    const int w = f.width(), h = f.height();

    ScalarField tmp(f.grid), out(f.grid);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += k[i + radius] * f.at(mirror_edge(x + i, w), y);
            tmp.at(x, y) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += k[i + radius] * tmp.at(x, mirror_edge(y + i, h));
            out.at(x, y) = acc;
        }
    return out;
}

}  // namespace hmcf
