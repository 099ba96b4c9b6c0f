#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hmcf {

struct Grid2D {
    int width = 0;
    int height = 0;
    double spacing = 1.0;

    Grid2D() = default;
    Grid2D(int w, int h, double s = 1.0) : width(w), height(h), spacing(s) {
        if (w < 1 || h < 1) throw std::invalid_argument("Grid2D: extents must be positive");
        if (!(s > 0.0)) throw std::invalid_argument("Grid2D: spacing must be positive");
    }

    bool operator==(const Grid2D&) const = default;
    std::size_t cells() const { return std::size_t(width) * std::size_t(height); }
};

// Vertex mirror (reflect-101): ghost(-1) = f(1), ghost(n) = f(n-2).
// Second-order realization of a zero normal derivative on the boundary line.
inline int mirror101(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

// Edge mirror (reflect): ghost(-1) = f(0), ghost(n) = f(n-1).
inline int mirror_edge(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

struct ScalarField {
    Grid2D grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double fill = 0.0) : grid(g), v(g.cells(), fill) {}

    int width() const { return grid.width; }
    int height() const { return grid.height; }

    double& at(int x, int y) { return v[std::size_t(y) * grid.width + x]; }
    double at(int x, int y) const { return v[std::size_t(y) * grid.width + x]; }

    bool operator==(const ScalarField&) const = default;

    // Read with reflect-101 ghost cells; safe for any index.
    double atm(int x, int y) const {
        return v[std::size_t(mirror101(y, grid.height)) * grid.width + mirror101(x, grid.width)];
    }
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
    if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

inline bool all_finite(const ScalarField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Central differences with mirrored ghosts.
inline ScalarField grad_x(const ScalarField& f) {
    ScalarField g(f.grid);
    const double inv2h = 1.0 / (2.0 * f.grid.spacing);
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            g.at(x, y) = (f.atm(x + 1, y) - f.atm(x - 1, y)) * inv2h;
    return g;
}

inline ScalarField grad_y(const ScalarField& f) {
    ScalarField g(f.grid);
    const double inv2h = 1.0 / (2.0 * f.grid.spacing);
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            g.at(x, y) = (f.atm(x, y + 1) - f.atm(x, y - 1)) * inv2h;
    return g;
}

inline ScalarField gradient_magnitude(const ScalarField& f) {
    ScalarField gx = grad_x(f), gy = grad_y(f);
    ScalarField m(f.grid);
    for (std::size_t i = 0; i < m.v.size(); ++i) m.v[i] = std::hypot(gx.v[i], gy.v[i]);
    return m;
}

}  // namespace hmcf
