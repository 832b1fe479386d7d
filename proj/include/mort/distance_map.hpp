#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mort/grid.hpp"
#include "mort/patches.hpp"

namespace mort {

/// Per-patch-normalized distance fields. f_interior covers interior patches,
/// f_complementary the complementary ones; both are zero elsewhere and take
/// values in (0, 1], reaching exactly 1 at each patch's innermost pixel.
struct patchy_distance_map {
    int width = 0;
    int height = 0;
    field_grid f_interior;
    field_grid f_complementary;
};

namespace detail {

constexpr double edt_inf = 1e20;

/// 1D squared-distance lower envelope (Felzenszwalb & Huttenlocher). f holds
/// per-cell offsets (0 at seeds, edt_inf elsewhere or a previous pass's
/// result); d receives min over q of (p-q)^2 + f[q].
inline void edt_pass_1d(const double* f, int n, double* d, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -edt_inf;
    z[1] = +edt_inf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + static_cast<double>(q) * q) -
                    (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + static_cast<double>(q) * q) -
                 (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = +edt_inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

/// Exact squared Euclidean distance to the nearest seed cell. Squared
/// distances between lattice points are integers, and the envelope
/// boundaries between seed parabolas are exact half-integers, so results
/// carry no floating-point error.
inline void edt_squared(field_grid& g) {
    const int w = g.width(), h = g.height();
    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = g.at(x, y);
        edt_pass_1d(f.data(), h, d.data(), v.data(), z.data());
        for (int y = 0; y < h; ++y) g.at(x, y) = d[y];
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = g.at(x, y);
        edt_pass_1d(f.data(), w, d.data(), v.data(), z.data());
        for (int x = 0; x < w; ++x) g.at(x, y) = d[x];
    }
}

} // namespace detail

/// Compute the patchy distance map. For every pixel p of patch P the raw
/// value is the exact Euclidean distance to the nearest pixel not in P
/// (virtual pixels beyond the grid count as outside, so the raw minimum is 1
/// and every patch has a positive maximum); the stored value is raw divided
/// by the patch maximum.
inline patchy_distance_map compute_pdm(const patch_label_map& labels) {
    patchy_distance_map pdm;
    pdm.width = labels.width;
    pdm.height = labels.height;
    pdm.f_interior = field_grid(labels.width, labels.height, 0.0);
    pdm.f_complementary = field_grid(labels.width, labels.height, 0.0);

    const int patch_count = labels.patch_count();
    if (patch_count == 0) return pdm;

    // Patch bounding boxes.
    std::vector<int> x0(patch_count, labels.width), y0(patch_count, labels.height);
    std::vector<int> x1(patch_count, -1), y1(patch_count, -1);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x) {
            const int32_t id = labels.labels.at(x, y);
            if (id < 0) continue;
            x0[id] = std::min(x0[id], x);
            y0[id] = std::min(y0[id], y);
            x1[id] = std::max(x1[id], x);
            y1[id] = std::max(y1[id], y);
        }

    for (int32_t id = 0; id < patch_count; ++id) {
        // Expanded box: one ring around the patch. Ring cells are always
        // outside the patch, and any farther non-patch pixel is dominated by
        // a ring cell, so the local transform is exact.
        const int bx = x0[id] - 1, by = y0[id] - 1;
        const int bw = x1[id] - x0[id] + 3, bh = y1[id] - y0[id] + 3;
        field_grid local(bw, bh, 0.0);
        for (int y = 0; y < bh; ++y)
            for (int x = 0; x < bw; ++x) {
                const int gx = bx + x, gy = by + y;
                const bool in_patch =
                    labels.labels.in_bounds(gx, gy) && labels.labels.at(gx, gy) == id;
                local.at(x, y) = in_patch ? detail::edt_inf : 0.0;
            }
        detail::edt_squared(local);

        double max_raw = 0.0;
        for (int y = 0; y < bh; ++y)
            for (int x = 0; x < bw; ++x) {
                const int gx = bx + x, gy = by + y;
                if (!labels.labels.in_bounds(gx, gy) || labels.labels.at(gx, gy) != id) continue;
                local.at(x, y) = std::sqrt(local.at(x, y));
                max_raw = std::max(max_raw, local.at(x, y));
            }
        field_grid& field = labels.kinds[id] == patch_kind::interior ? pdm.f_interior
                                                                     : pdm.f_complementary;
        for (int y = 0; y < bh; ++y)
            for (int x = 0; x < bw; ++x) {
                const int gx = bx + x, gy = by + y;
                if (!labels.labels.in_bounds(gx, gy) || labels.labels.at(gx, gy) != id) continue;
                field.at(gx, gy) = local.at(x, y) / max_raw;
            }
    }
    return pdm;
}

} // namespace mort
