#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mort/error.hpp"
#include "mort/grid.hpp"

namespace mort {

/// Rasterized shape support. foreground holds 0/1 per pixel, row-major;
/// foreground_count caches the number of set pixels.
struct binary_mask {
    int width = 0;
    int height = 0;
    mask_grid foreground;
    int64_t foreground_count = 0;

    bool is_set(int x, int y) const { return foreground.at(x, y) != 0; }

    friend bool operator==(const binary_mask& a, const binary_mask& b) {
        return a.width == b.width && a.height == b.height && a.foreground == b.foreground;
    }
};

inline binary_mask make_mask(int width, int height) {
    binary_mask m;
    m.width = width;
    m.height = height;
    m.foreground = mask_grid(width, height, 0);
    return m;
}

inline void recount(binary_mask& m) {
    int64_t n = 0;
    for (uint8_t v : m.foreground) n += (v != 0);
    m.foreground_count = n;
}

/// Binarize an 8-bit grayscale grid: foreground = value >= threshold.
inline binary_mask binarize(const gray_grid& gray, int threshold) {
    binary_mask m = make_mask(gray.width(), gray.height());
    for (int y = 0; y < gray.height(); ++y)
        for (int x = 0; x < gray.width(); ++x)
            m.foreground.at(x, y) = gray.at(x, y) >= threshold ? 1 : 0;
    recount(m);
    return m;
}

namespace detail {

/// Label 4-connected foreground components. Labels are assigned in row-major
/// first-encounter order starting at 0; background stays -1. Returns the
/// label grid and per-component pixel counts.
inline std::pair<label_grid, std::vector<int64_t>> label_components_4(const mask_grid& fg) {
    const int w = fg.width(), h = fg.height();
    label_grid labels(w, h, -1);
    std::vector<int64_t> sizes;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (fg.at(x, y) == 0 || labels.at(x, y) >= 0) continue;
            const int32_t id = static_cast<int32_t>(sizes.size());
            sizes.push_back(0);
            stack.clear();
            stack.emplace_back(x, y);
            labels.at(x, y) = id;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++sizes[id];
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int nx = cx + dx[k], ny = cy + dy[k];
                    if (!fg.in_bounds(nx, ny)) continue;
                    if (fg.at(nx, ny) == 0 || labels.at(nx, ny) >= 0) continue;
                    labels.at(nx, ny) = id;
                    stack.emplace_back(nx, ny);
                }
            }
        }
    }
    return {std::move(labels), std::move(sizes)};
}

} // namespace detail

/// Keep only the largest 4-connected foreground component (ties broken by
/// row-major first encounter). Throws no_foreground on an empty mask.
inline binary_mask largest_component(const binary_mask& mask) {
    if (mask.foreground_count == 0)
        raise(errc::no_foreground, "mask has no foreground pixels");
    auto [labels, sizes] = detail::label_components_4(mask.foreground);
    int32_t best = 0;
    for (int32_t id = 1; id < static_cast<int32_t>(sizes.size()); ++id)
        if (sizes[id] > sizes[best]) best = id;
    binary_mask out = make_mask(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            out.foreground.at(x, y) = labels.at(x, y) == best ? 1 : 0;
    out.foreground_count = sizes[best];
    return out;
}

/// Fill interior holes: any background region not 8-connected to the grid
/// border becomes foreground. Foreground is 4-connected, so the background
/// uses 8-connectivity.
inline binary_mask fill_holes(const binary_mask& mask) {
    const int w = mask.width, h = mask.height;
    mask_grid outside(w, h, 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        if (mask.foreground.at(x, y) != 0 || outside.at(x, y) != 0) return;
        outside.at(x, y) = 1;
        stack.emplace_back(x, y);
    };
    for (int x = 0; x < w; ++x) {
        push(x, 0);
        push(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push(0, y);
        push(w - 1, y);
    }
    while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (dx != 0 || dy != 0) push(cx + dx, cy + dy);
    }
    binary_mask out = make_mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.foreground.at(x, y) = outside.at(x, y) ? 0 : 1;
    recount(out);
    return out;
}

/// Shape support: the filled outer contour of the largest 4-connected
/// component. foreground_count of the result is N_f.
inline binary_mask filled_support(const binary_mask& mask) {
    return fill_holes(largest_component(mask));
}

/// Crop mask and a same-sized companion grid to the mask's foreground
/// bounding box. Canonicalizes coordinates so integer translations of the
/// input produce identical rasters.
inline std::pair<binary_mask, gray_grid> crop_to_foreground(const binary_mask& mask,
                                                            const gray_grid& companion) {
    if (mask.foreground_count == 0)
        raise(errc::no_foreground, "mask has no foreground pixels");
    if (companion.width() != mask.width || companion.height() != mask.height)
        raise(errc::dimension_mismatch, "companion grid dimensions differ from mask");
    int x0 = mask.width, y0 = mask.height, x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.is_set(x, y)) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    const int w = x1 - x0 + 1, h = y1 - y0 + 1;
    binary_mask out = make_mask(w, h);
    gray_grid comp(w, h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            out.foreground.at(x, y) = mask.foreground.at(x + x0, y + y0);
            comp.at(x, y) = companion.at(x + x0, y + y0);
        }
    out.foreground_count = mask.foreground_count;
    return {std::move(out), std::move(comp)};
}

} // namespace mort
