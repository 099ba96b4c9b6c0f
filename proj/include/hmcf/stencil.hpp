#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmcf/field.hpp"

namespace hmcf {

inline void require_stencil_grid(const Grid2D& g, const char* what) {
    if (g.width < 3 || g.height < 3)
        throw std::invalid_argument(std::string(what) + ": grid must be at least 3x3");
}

// Nine-point Laplacian, (b / 6h^2) * (4*(axial sum) + (diagonal sum) - 20*center),
// with reflect-101 ghosts. Exact on polynomials of total degree <= 3.
// Operand grouping is mirror-symmetric so mirrored inputs give bitwise mirrored outputs.
inline ScalarField nine_point_laplacian(const ScalarField& f, double b) {
    require_stencil_grid(f.grid, "nine_point_laplacian");
    ScalarField out(f.grid);
    const double scale = b / (6.0 * f.grid.spacing * f.grid.spacing);
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            const double axial = (f.atm(x - 1, y) + f.atm(x + 1, y)) + (f.atm(x, y - 1) + f.atm(x, y + 1));
            const double diag = (f.atm(x - 1, y - 1) + f.atm(x + 1, y - 1)) +
                                (f.atm(x - 1, y + 1) + f.atm(x + 1, y + 1));
            out.at(x, y) = scale * (4.0 * axial + diag - 20.0 * f.at(x, y));
        }
    }
    return out;
}

// Spatially varying coefficient: the cell's own b(x,y) multiplies the stencil result.
inline ScalarField nine_point_laplacian(const ScalarField& f, const ScalarField& b) {
    require_stencil_grid(f.grid, "nine_point_laplacian");
    require_same_grid(f, b, "nine_point_laplacian");
    ScalarField out = nine_point_laplacian(f, 1.0);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
    return out;
}

// kappa = -div(grad phi / |grad phi|); positive for a convex positive-inside region.
// Gradient magnitude is floored at 1e-8 before normalization.
inline ScalarField curvature(const ScalarField& phi) {
    require_stencil_grid(phi.grid, "curvature");
    ScalarField gx = grad_x(phi), gy = grad_y(phi);
    ScalarField nx(phi.grid), ny(phi.grid);
    for (std::size_t i = 0; i < phi.v.size(); ++i) {
        const double mag = std::max(std::hypot(gx.v[i], gy.v[i]), 1e-8);
        nx.v[i] = gx.v[i] / mag;
        ny.v[i] = gy.v[i] / mag;
    }
    ScalarField dxx = grad_x(nx), dyy = grad_y(ny);
    ScalarField k(phi.grid);
    for (std::size_t i = 0; i < k.v.size(); ++i) k.v[i] = -(dxx.v[i] + dyy.v[i]);
    return k;
}

}  // namespace hmcf
