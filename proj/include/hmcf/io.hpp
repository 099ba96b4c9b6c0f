#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hmcf/field.hpp"
#include "hmcf/image.hpp"
#include "hmcf/metrics.hpp"

namespace hmcf {

struct OverlaySpec {
    std::array<int, 3> color{255, 0, 0};  // contour paint, one pixel thick
};

namespace detail {

// PNM header tokens: whitespace separated, '#' starts a comment to end of line.
inline std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(char(c));
    }
    return tok;
}

inline int pnm_int(std::istream& in, const std::string& path, const char* what) {
    const std::string tok = pnm_token(in);
    if (tok.empty()) throw std::runtime_error("load_image: " + path + ": truncated header (" + what + ")");
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("load_image: " + path + ": bad " + std::string(what) + " token '" +
                                 tok + "'");
    }
}

}  // namespace detail

// PGM reader (P2 ASCII and P5 binary, maxval <= 65535); intensities divided by
// maxval so the result lands in [0, 1].
inline Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_image: cannot open " + path);
    char m0 = 0, m1 = 0;
    in.get(m0).get(m1);
    const std::string magic{m0, m1};
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("load_image: " + path + ": unsupported magic '" + magic + "'");

    const int w = detail::pnm_int(in, path, "width");
    const int h = detail::pnm_int(in, path, "height");
    const int maxval = detail::pnm_int(in, path, "maxval");
    if (w < 1 || h < 1) throw std::runtime_error("load_image: " + path + ": bad dimensions");
    if (maxval < 1 || maxval > 65535)
        throw std::runtime_error("load_image: " + path + ": maxval out of range");

    ScalarField f(Grid2D(w, h));
    if (magic == "P2") {
        for (std::size_t i = 0; i < f.v.size(); ++i) {
            const int v = detail::pnm_int(in, path, "sample");
            if (v > maxval) throw std::runtime_error("load_image: " + path + ": sample above maxval");
            f.v[i] = double(v) / maxval;
        }
    } else {
        // the single whitespace after maxval was consumed with its token
        const int bytes = maxval < 256 ? 1 : 2;
        std::string raster(f.v.size() * bytes, '\0');
        in.read(raster.data(), std::streamsize(raster.size()));
        if (in.gcount() != std::streamsize(raster.size()))
            throw std::runtime_error("load_image: " + path + ": truncated raster");
        for (std::size_t i = 0; i < f.v.size(); ++i) {
            const unsigned hi = static_cast<unsigned char>(raster[i * bytes]);
            const unsigned v =
                bytes == 1 ? hi : (hi << 8) | static_cast<unsigned char>(raster[i * bytes + 1]);
            if (v > unsigned(maxval))
                throw std::runtime_error("load_image: " + path + ": sample above maxval");
            f.v[i] = double(v) / maxval;
        }
    }
    return Image{std::move(f)};
}

inline BinaryMask load_mask(const std::string& path) {
    const Image img = load_image(path);
    BinaryMask m(img.intensity.grid);
    for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = img.intensity.v[i] > 0.5 ? 1 : 0;
    return m;
}

// 8-bit binary PGM writer (fixture and mask output helper).
inline void save_pgm(const Image& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_pgm: cannot open " + path);
    out << "P5\n" << image.intensity.width() << " " << image.intensity.height() << "\n255\n";
    for (double v : image.intensity.v)
        out.put(char(int(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
    if (!out) throw std::runtime_error("save_pgm: write failed for " + path);
}

// P6 PPM with the image in grayscale and cells adjacent to a phi sign change
// painted in the overlay color.
inline void save_overlay(const Image& image, const ScalarField& phi, const std::string& path,
                         const OverlaySpec& spec = {}, const ScalarField* phi2 = nullptr,
                         const std::array<int, 3>& color2 = {0, 90, 255}) {
    require_same_grid(image.intensity, phi, "save_overlay");
    const int w = phi.width(), h = phi.height();
    auto on_contour = [&](const ScalarField& f, int x, int y) {
        const bool s = f.at(x, y) > 0.0;
        return (x > 0 && (f.at(x - 1, y) > 0.0) != s) || (x + 1 < w && (f.at(x + 1, y) > 0.0) != s) ||
               (y > 0 && (f.at(x, y - 1) > 0.0) != s) || (y + 1 < h && (f.at(x, y + 1) > 0.0) != s);
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_overlay: cannot open " + path);
    out << "P6\n" << w << " " << h << "\n255\n";
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::array<int, 3> rgb;
            if (on_contour(phi, x, y))
                rgb = spec.color;
            else if (phi2 && on_contour(*phi2, x, y))
                rgb = color2;
            else {
                const int g = int(std::lround(std::clamp(image.intensity.at(x, y), 0.0, 1.0) * 255.0));
                rgb = {g, g, g};
            }
            for (int c : rgb) out.put(char(c));
        }
    if (!out) throw std::runtime_error("save_overlay: write failed for " + path);
}

// Plain-text matrix: "width height" line, then height rows of width values.
// %.17g makes the round trip exact for doubles.
inline void save_field(const ScalarField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    out << f.width() << " " << f.height() << "\n";
    char buf[64];
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            std::snprintf(buf, sizeof buf, "%.17g", f.at(x, y));
            out << (x ? " " : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("save_field: write failed for " + path);
}

inline ScalarField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    int w = 0, h = 0;
    if (!(in >> w >> h) || w < 1 || h < 1)
        throw std::runtime_error("load_field: " + path + ": bad dimension header");
    ScalarField f(Grid2D(w, h));
    for (std::size_t i = 0; i < f.v.size(); ++i)
        if (!(in >> f.v[i]))
            throw std::runtime_error("load_field: " + path + ": malformed or short value list");
    std::string extra;
    if (in >> extra) throw std::runtime_error("load_field: " + path + ": trailing data '" + extra + "'");
    return f;
}

}  // namespace hmcf
