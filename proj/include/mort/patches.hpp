#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mort/error.hpp"
#include "mort/grid.hpp"
#include "mort/mask.hpp"

namespace mort {

enum class patch_kind : uint8_t { interior, complementary };

enum class patch_policy_kind : uint8_t { threshold, enclosure };

/// How foreground pixels split into interior and complementary patches.
///
/// threshold: pixels with patch_source >= tau are interior, the rest
/// complementary (the bright-patch rule used for spotted shapes).
///
/// enclosure: pixels with patch_source >= tau are structure ("vein") pixels.
/// Removing them partitions the remaining support into regions; regions not
/// reaching the support boundary are interior, regions adjacent to the
/// boundary are complementary, and the structure pixels themselves form
/// complementary patches so that every support pixel is covered.
struct patch_policy {
    patch_policy_kind kind = patch_policy_kind::threshold;
    int tau = 128;
};

/// Per-pixel patch ids plus the kind of each patch. Ids are assigned in
/// row-major first-encounter order; -1 marks pixels outside every patch.
struct patch_label_map {
    int width = 0;
    int height = 0;
    label_grid labels;
    std::vector<patch_kind> kinds;

    int patch_count() const { return static_cast<int>(kinds.size()); }
};

namespace detail {

/// Reassign ids so they follow row-major first-encounter order.
inline void relabel_row_major(patch_label_map& map) {
    std::vector<int32_t> remap(map.kinds.size(), -1);
    std::vector<patch_kind> kinds;
    kinds.reserve(map.kinds.size());
    int32_t next = 0;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            int32_t id = map.labels.at(x, y);
            if (id < 0) continue;
            if (remap[id] < 0) {
                remap[id] = next++;
                kinds.push_back(map.kinds[id]);
            }
            map.labels.at(x, y) = remap[id];
        }
    map.kinds = std::move(kinds);
}

/// True when (x, y) lies on the support boundary: a support pixel with an
/// 8-neighbor outside the support (virtual pixels beyond the grid count as
/// outside).
inline bool on_support_boundary(const binary_mask& s, int x, int y) {
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = x + dx, ny = y + dy;
            if (!s.foreground.in_bounds(nx, ny) || !s.is_set(nx, ny)) return true;
        }
    return false;
}

} // namespace detail

/// Partition the mask's foreground into interior and complementary patches
/// according to the policy. Every foreground pixel lands in exactly one
/// patch; each patch is a single 4-connected component.
inline patch_label_map segment_patches(const binary_mask& mask, const gray_grid& patch_source,
                                       patch_policy policy) {
    if (patch_source.width() != mask.width || patch_source.height() != mask.height)
        raise(errc::dimension_mismatch, "patch_source dimensions differ from mask");

    const int w = mask.width, h = mask.height;
    patch_label_map map;
    map.width = w;
    map.height = h;

    const bool enclosure = policy.kind == patch_policy_kind::enclosure;

    // Split foreground into the bright/structure set and the rest.
    mask_grid bright(w, h, 0);
    mask_grid rest(w, h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!mask.is_set(x, y)) continue;
            if (patch_source.at(x, y) >= policy.tau)
                bright.at(x, y) = 1;
            else
                rest.at(x, y) = 1;
        }

    auto [bright_labels, bright_sizes] = detail::label_components_4(bright);
    auto [rest_labels, rest_sizes] = detail::label_components_4(rest);

    if (!enclosure) {
        // threshold policy: bright components are interior, the rest
        // complementary.
        map.labels = label_grid(w, h, -1);
        const int32_t offset = static_cast<int32_t>(bright_sizes.size());
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (bright_labels.at(x, y) >= 0)
                    map.labels.at(x, y) = bright_labels.at(x, y);
                else if (rest_labels.at(x, y) >= 0)
                    map.labels.at(x, y) = offset + rest_labels.at(x, y);
            }
        map.kinds.assign(bright_sizes.size(), patch_kind::interior);
        map.kinds.insert(map.kinds.end(), rest_sizes.size(), patch_kind::complementary);
        detail::relabel_row_major(map);
        return map;
    }

    // enclosure policy: components of the support minus structure pixels are
    // interior unless they reach the support boundary; structure components
    // are complementary.
    std::vector<uint8_t> touches_boundary(rest_sizes.size(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int32_t id = rest_labels.at(x, y);
            if (id < 0 || touches_boundary[id]) continue;
            if (detail::on_support_boundary(mask, x, y)) {
                touches_boundary[id] = 1;
                continue;
            }
            // also complementary if an 8-neighbor is a boundary pixel of the
            // support (an outer-contour point)
            for (int dy = -1; dy <= 1 && !touches_boundary[id]; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (!mask.foreground.in_bounds(nx, ny) || !mask.is_set(nx, ny)) continue;
                    if (detail::on_support_boundary(mask, nx, ny)) {
                        touches_boundary[id] = 1;
                        break;
                    }
                }
        }

    map.labels = label_grid(w, h, -1);
    const int32_t offset = static_cast<int32_t>(rest_sizes.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (rest_labels.at(x, y) >= 0)
                map.labels.at(x, y) = rest_labels.at(x, y);
            else if (bright_labels.at(x, y) >= 0)
                map.labels.at(x, y) = offset + bright_labels.at(x, y);
        }
    map.kinds.resize(rest_sizes.size());
    for (size_t i = 0; i < rest_sizes.size(); ++i)
        map.kinds[i] = touches_boundary[i] ? patch_kind::complementary : patch_kind::interior;
    map.kinds.insert(map.kinds.end(), bright_sizes.size(), patch_kind::complementary);
    detail::relabel_row_major(map);
    return map;
}

} // namespace mort
