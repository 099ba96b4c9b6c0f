#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hmcf/field.hpp"

namespace hmcf {

struct contour_vanished : std::runtime_error {
    contour_vanished() : std::runtime_error("contour vanished: field has no zero crossing") {}
};

// Level set function with SDF bookkeeping. Sign convention: positive inside.
struct LevelSetState {
    ScalarField phi;
    bool is_sdf = false;
};

struct ContourPoint {
    double x = 0.0;
    double y = 0.0;
};

// Sub-pixel zero level set positions on the curve C_b: one point per grid edge
// with a strict sign change (linear interpolation), plus every exact-zero cell.
struct ContourPointSet {
    std::vector<ContourPoint> points;
};

inline ContourPointSet zero_contour_points(const ScalarField& phi) {
    ContourPointSet c;
    const int w = phi.width(), h = phi.height();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double a = phi.at(x, y);
            if (a == 0.0) c.points.push_back({double(x), double(y)});
            if (x + 1 < w) {
                const double b = phi.at(x + 1, y);
                if (a * b < 0.0) c.points.push_back({x + a / (a - b), double(y)});
            }
            if (y + 1 < h) {
                const double b = phi.at(x, y + 1);
                if (a * b < 0.0) c.points.push_back({double(x), y + a / (a - b)});
            }
        }
    return c;
}

inline LevelSetState make_circle_sdf(const Grid2D& grid, double cx, double cy, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("make_circle_sdf: radius must be positive");
    if (cx < 0.0 || cx > grid.width - 1 || cy < 0.0 || cy > grid.height - 1)
        throw std::invalid_argument("make_circle_sdf: center outside grid bounds");
    LevelSetState s{ScalarField(grid), true};
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x)
            s.phi.at(x, y) = r - std::hypot(x - cx, y - cy);
    return s;
}

// Oriented line piece of the interpolated zero level set within one grid cell.
struct ContourSegment {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

// Marching-squares segments of the linearly interpolated zero level set. The
// saddle ambiguity (four crossed edges) resolves by the sign of the corner
// mean. Exact-zero cells contribute degenerate point segments.
inline std::vector<ContourSegment> zero_contour_segments(const ScalarField& phi) {
    std::vector<ContourSegment> segs;
    const int w = phi.width(), h = phi.height();
    const auto cross = [](double a, double b) { return (a > 0.0) != (b > 0.0); };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (phi.at(x, y) == 0.0) {
                segs.push_back({double(x), double(y), double(x), double(y)});
                continue;
            }
            if (x + 1 >= w || y + 1 >= h) continue;
            const double v00 = phi.at(x, y), v10 = phi.at(x + 1, y);
            const double v01 = phi.at(x, y + 1), v11 = phi.at(x + 1, y + 1);
            ContourPoint pt[4];  // bottom, right, top, left of the cell square
            bool on[4] = {false, false, false, false};
            if (cross(v00, v10)) on[0] = true, pt[0] = {x + v00 / (v00 - v10), double(y)};
            if (cross(v10, v11)) on[1] = true, pt[1] = {double(x + 1), y + v10 / (v10 - v11)};
            if (cross(v01, v11)) on[2] = true, pt[2] = {x + v01 / (v01 - v11), double(y + 1)};
            if (cross(v00, v01)) on[3] = true, pt[3] = {double(x), y + v00 / (v00 - v01)};
            const int n = int(on[0]) + int(on[1]) + int(on[2]) + int(on[3]);
            if (n == 2) {
                ContourPoint e[2];
                int k = 0;
                for (int i = 0; i < 4; ++i)
                    if (on[i]) e[k++] = pt[i];
                segs.push_back({e[0].x, e[0].y, e[1].x, e[1].y});
            } else if (n == 4) {
                const bool center_in = v00 + v10 + v01 + v11 > 0.0;
                if (center_in == (v00 > 0.0)) {
                    segs.push_back({pt[0].x, pt[0].y, pt[1].x, pt[1].y});   // bottom-right
                    segs.push_back({pt[3].x, pt[3].y, pt[2].x, pt[2].y});   // left-top
                } else {
                    segs.push_back({pt[0].x, pt[0].y, pt[3].x, pt[3].y});   // bottom-left
                    segs.push_back({pt[2].x, pt[2].y, pt[1].x, pt[1].y});   // top-right
                }
            }
        }
    return segs;
}

namespace detail {

inline double segment_distance_sq(double px, double py, const ContourSegment& s) {
    const double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((px - s.x0) * dx + (py - s.y0) * dy) / len2, 0.0, 1.0);
    const double ex = px - (s.x0 + t * dx), ey = py - (s.y0 + t * dy);
    return ex * ex + ey * ey;
}

}  // namespace detail

// Signed Euclidean distance to the interpolated zero level set of the input,
// keeping the input's sign at every cell. Exact nearest-segment search.
inline LevelSetState reinitialize_sdf(const LevelSetState& state) {
    const ScalarField& phi = state.phi;
    const std::vector<ContourSegment> segs = zero_contour_segments(phi);
    if (segs.empty()) throw contour_vanished();

    LevelSetState out{ScalarField(phi.grid), true};
    const ContourSegment* sp = segs.data();
    const std::size_t n = segs.size();
    for (int y = 0; y < phi.height(); ++y)
        for (int x = 0; x < phi.width(); ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double d2 = detail::segment_distance_sq(x, y, sp[i]);
                if (d2 < best) best = d2;
            }
            const double d = std::sqrt(best);
            out.phi.at(x, y) = phi.at(x, y) < 0.0 ? -d : d;
        }
    return out;
}

}  // namespace hmcf
