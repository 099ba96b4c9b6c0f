#pragma once

#include <cstdint>
#include <vector>

#include "hmcf/field.hpp"

namespace hmcf {

// Connected-component summary of the sign field of phi:
//   components: 4-connected components of {phi > 0}, with per-component masks
//   and boundary cells (cells with a 4-neighbor of opposite sign or the border);
//   holes: 4-connected components of {phi < 0} that do not touch the grid border.
struct ComponentAnalysis {
    int component_count = 0;
    int hole_count = 0;
    std::vector<std::vector<std::uint8_t>> component_masks;  // row-major, 1 = member
    std::vector<std::vector<int>> component_boundaries;      // cell indices per component
};

namespace detail {

// Flood fill of pred-cells from seed over 4-neighbors; marks labels with id.
inline void flood4(const ScalarField& phi, std::vector<int>& labels, int seed, int id, bool positive) {
    const int w = phi.width(), h = phi.height();
    std::vector<int> stack{seed};
    labels[seed] = id;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w, y = i / w;
        const int nb[4] = {x > 0 ? i - 1 : -1, x + 1 < w ? i + 1 : -1, y > 0 ? i - w : -1,
                           y + 1 < h ? i + w : -1};
        for (int j : nb) {
            if (j < 0 || labels[j] != 0) continue;
            const bool in = positive ? (phi.v[j] > 0.0) : (phi.v[j] < 0.0);
            if (in) {
                labels[j] = id;
                stack.push_back(j);
            }
        }
    }
}

}  // namespace detail

inline ComponentAnalysis zero_level_components(const ScalarField& phi) {
    const int w = phi.width(), h = phi.height();
    ComponentAnalysis out;

    std::vector<int> labels(phi.v.size(), 0);
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        if (phi.v[i] > 0.0 && labels[i] == 0)
            detail::flood4(phi, labels, int(i), ++out.component_count, true);

    out.component_masks.assign(out.component_count, std::vector<std::uint8_t>(phi.v.size(), 0));
    out.component_boundaries.assign(out.component_count, {});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int i = y * w + x;
            if (labels[i] == 0) continue;
            out.component_masks[labels[i] - 1][i] = 1;
            const bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
            const bool edge = border || phi.at(x - 1, y) <= 0.0 || phi.at(x + 1, y) <= 0.0 ||
                              phi.at(x, y - 1) <= 0.0 || phi.at(x, y + 1) <= 0.0;
            if (edge) out.component_boundaries[labels[i] - 1].push_back(i);
        }

    std::vector<int> neg(phi.v.size(), 0);
    int neg_count = 0;
    std::vector<bool> touches_border;
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        if (phi.v[i] < 0.0 && neg[i] == 0) {
            detail::flood4(phi, neg, int(i), ++neg_count, false);
            touches_border.push_back(false);
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x == 0 || y == 0 || x == w - 1 || y == h - 1) && neg[y * w + x] != 0)
                touches_border[neg[y * w + x] - 1] = true;
    for (bool t : touches_border)
        if (!t) ++out.hole_count;
    return out;
}

}  // namespace hmcf
