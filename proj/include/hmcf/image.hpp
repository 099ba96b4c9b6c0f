#pragma once

#include <algorithm>
#include <stdexcept>

#include "hmcf/field.hpp"

namespace hmcf {

// Grayscale image with intensities in [0, 1].
struct Image {
    ScalarField intensity;
};

inline Image make_image(ScalarField f) {
    for (double v : f.v)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("Image: intensities must lie in [0, 1]");
    return Image{std::move(f)};
}

inline double image_mean(const Image& img) {
    double s = 0.0;
    for (double v : img.intensity.v) s += v;
    return s / double(img.intensity.v.size());
}

}  // namespace hmcf
