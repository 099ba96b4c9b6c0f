#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hmcf/field.hpp"
#include "hmcf/sdf.hpp"

namespace hmcf {

struct BinaryMask {
    Grid2D grid;
    std::vector<std::uint8_t> bits;  // 1 = interior

    BinaryMask() = default;
    explicit BinaryMask(const Grid2D& g) : grid(g), bits(g.cells(), 0) {}
};

inline BinaryMask threshold_mask(const ScalarField& phi) {
    BinaryMask m(phi.grid);
    for (std::size_t i = 0; i < phi.v.size(); ++i) m.bits[i] = phi.v[i] > 0.0 ? 1 : 0;
    return m;
}

// Dice coefficient 2|A n B| / (|A| + |B|); 1 when both masks are empty.
inline double dice(const BinaryMask& a, const BinaryMask& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("dice: grid mismatch");
    std::size_t na = 0, nb = 0, ni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        na += a.bits[i];
        nb += b.bits[i];
        ni += a.bits[i] & b.bits[i];
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * double(ni) / double(na + nb);
}

// Modified symmetric Hausdorff distance: the larger of the two directed
// mean-of-minima distances between the point sets.
inline double modified_hausdorff(const ContourPointSet& a, const ContourPointSet& b) {
    if (a.points.empty() || b.points.empty())
        throw std::invalid_argument("modified_hausdorff: point sets must be non-empty");
    auto directed = [](const ContourPointSet& p, const ContourPointSet& q) {
        double sum = 0.0;
        for (const ContourPoint& s : p.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const ContourPoint& t : q.points) {
                const double dx = s.x - t.x, dy = s.y - t.y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) best = d2;
            }
            sum += std::sqrt(best);
        }
        return sum / double(p.points.size());
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace hmcf
