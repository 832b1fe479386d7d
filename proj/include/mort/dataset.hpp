#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mort/error.hpp"
#include "mort/grid.hpp"
#include "mort/mask.hpp"
#include "mort/patches.hpp"
#include "mort/rng.hpp"

namespace mort {

/// One manifest row: an image path, its class label, the type index within
/// the sample, and optional per-row policy overrides.
struct manifest_row {
    std::string image_path; // as written in the file
    std::string label;
    int type_index = 0;
    std::string policy_params; // "key=value;key=value", may be empty
};

/// Parsed dataset manifest. Rows appear in file order; k is the declared
/// pair count and every sample contributes exactly k consecutive rows with
/// type_index 0..k-1.
struct manifest {
    std::vector<manifest_row> rows;
    std::filesystem::path root;
    int k = 1;

    std::filesystem::path resolve(const manifest_row& row) const { return root / row.image_path; }
};

/// Tab-separated manifest, header `#mort-manifest v1 K=<k>`, one row per
/// (sample, type_index): image_path <TAB> label <TAB> type_index
/// [<TAB> policy_params]. Malformed input is rejected, never repaired.
inline manifest load_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) raise(errc::missing_file, path + ": cannot open");
    manifest m;
    m.root = std::filesystem::path(path).parent_path();

    std::string line;
    int line_no = 0;
    if (!std::getline(is, line)) raise(errc::parse_error, path + ":1: no rows (empty file)");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int k = 0;
    if (std::sscanf(line.c_str(), "#mort-manifest v1 K=%d", &k) != 1 || k < 1)
        raise(errc::parse_error, path + ":1: expected header '#mort-manifest v1 K=<k>'");
    m.k = k;

    int expected_type = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (is.peek() == EOF) break; // single trailing newline is fine
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": blank row");
        }
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            const size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 3 || fields.size() > 4)
            raise(errc::parse_error,
                  path + ":" + std::to_string(line_no) + ": expected 3 or 4 tab-separated fields");
        manifest_row row;
        row.image_path = fields[0];
        row.label = fields[1];
        if (row.image_path.empty())
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": empty image path");
        if (row.label.empty())
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": empty label");
        try {
            size_t used = 0;
            row.type_index = std::stoi(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": bad type_index");
        }
        if (row.type_index < 0 || row.type_index >= m.k)
            raise(errc::parse_error,
                  path + ":" + std::to_string(line_no) + ": type_index out of range");
        if (row.type_index != expected_type)
            raise(errc::parse_error, path + ":" + std::to_string(line_no) +
                                         ": sample rows out of order (expected type_index " +
                                         std::to_string(expected_type) + ")");
        if (fields.size() == 4) row.policy_params = fields[3];
        m.rows.push_back(std::move(row));
        expected_type = (expected_type + 1) % m.k;
    }
    if (expected_type != 0)
        raise(errc::parse_error, path + ": incomplete final sample (missing type rows)");
    if (m.rows.empty()) raise(errc::parse_error, path + ": no rows");
    return m;
}

/// Rows of one sample (k consecutive manifest rows). sample_id is the image
/// path of the first row.
struct manifest_sample {
    std::string sample_id;
    std::string label;
    std::vector<const manifest_row*> rows;
};

inline std::vector<manifest_sample> group_samples(const manifest& m) {
    std::vector<manifest_sample> out;
    for (size_t i = 0; i < m.rows.size(); i += m.k) {
        manifest_sample s;
        s.sample_id = m.rows[i].image_path;
        s.label = m.rows[i].label;
        for (int j = 0; j < m.k; ++j) s.rows.push_back(&m.rows[i + j]);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic patchy shapes
// ---------------------------------------------------------------------------

enum class contour_family : uint8_t { blob, leafoid, wingoid };

struct synth_spec {
    contour_family family = contour_family::blob;
    int n_interior_patches = 3;
    uint64_t rng_seed = 0;
    int canvas = 128;
    double deformation_amplitude = 0.25;
};

inline const char* family_name(contour_family f) {
    switch (f) {
        case contour_family::blob: return "blob";
        case contour_family::leafoid: return "leafoid";
        default: return "wingoid";
    }
}

inline contour_family family_from_name(const std::string& name) {
    if (name == "blob") return contour_family::blob;
    if (name == "leafoid") return contour_family::leafoid;
    if (name == "wingoid") return contour_family::wingoid;
    raise(errc::parse_error, "unknown contour family '" + name + "'");
}

/// Deterministic star-convex shape with bright elliptical interior patches.
/// The mask is a radially perturbed region around the canvas center;
/// patch_source is dark except inside the requested ellipses, which stay
/// strictly inside the mask with at least one pixel of separation from the
/// boundary and from each other.
inline std::pair<binary_mask, gray_grid> synth_shape(const synth_spec& spec) {
    if (spec.canvas < 64) raise(errc::spec_infeasible, "canvas must be at least 64 pixels");
    const int cw = spec.canvas;
    rng_stream stream(spec.rng_seed, 1);

    const double cx = cw / 2.0, cy = cw / 2.0;
    const double amp = std::clamp(spec.deformation_amplitude, 0.0, 0.4);

    constexpr int harmonics = 3; // orders 2..4
    double coeff[harmonics], phase[harmonics];
    double total = 0.0;
    for (int h = 0; h < harmonics; ++h) {
        coeff[h] = stream.uniform(0.25, 1.0);
        phase[h] = stream.uniform(0.0, 2.0 * std::numbers::pi);
        total += coeff[h];
    }
    for (int h = 0; h < harmonics; ++h) coeff[h] *= amp / (total > 0.0 ? total : 1.0);

    double ax = 1.0, ay = 1.0, skew = 0.0;
    switch (spec.family) {
        case contour_family::blob: break;
        case contour_family::leafoid:
            ax = 1.30;
            ay = 0.72;
            break;
        case contour_family::wingoid:
            ax = 1.25;
            ay = 0.78;
            skew = 0.15;
            break;
    }

    // normalize so the worst-case radius leaves a border margin of 5% of the
    // canvas; translated or rotated copies must never interact with the edge
    const double base_r = 0.45 * cw / (std::max(ax, ay) * (1.0 + amp + skew));

    auto radius = [&](double phi) {
        const double e = 1.0 / std::sqrt((std::cos(phi) / ax) * (std::cos(phi) / ax) +
                                         (std::sin(phi) / ay) * (std::sin(phi) / ay));
        double deform = 0.0;
        for (int h = 0; h < harmonics; ++h) deform += coeff[h] * std::cos((h + 2) * phi + phase[h]);
        return base_r * e * (1.0 + deform + skew * std::sin(phi));
    };

    binary_mask mask = make_mask(cw, cw);
    for (int y = 0; y < cw; ++y)
        for (int x = 0; x < cw; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double rho = std::sqrt(dx * dx + dy * dy);
            if (rho <= radius(std::atan2(dy, dx))) mask.foreground.at(x, y) = 1;
        }
    recount(mask);
    if (mask.foreground_count == 0) raise(errc::spec_infeasible, "degenerate synthetic shape");

    {
        auto [labels, sizes] = detail::label_components_4(mask.foreground);
        if (sizes.size() != 1)
            raise(errc::spec_infeasible, "synthetic mask is not a single 4-connected component");
    }

    gray_grid source(cw, cw, 0);
    mask_grid occupied(cw, cw, 0);
    auto fits = [&](int px, int py, double a, double b, double ang) {
        const int reach = static_cast<int>(std::ceil(std::max(a, b))) + 2;
        const double ca = std::cos(ang), sa = std::sin(ang);
        for (int y = py - reach; y <= py + reach; ++y)
            for (int x = px - reach; x <= px + reach; ++x) {
                const double lx = (x - px) * ca + (y - py) * sa;
                const double ly = -(x - px) * sa + (y - py) * ca;
                if ((lx / a) * (lx / a) + (ly / b) * (ly / b) > 1.0) continue;
                // the ellipse pixel and its 8-neighborhood must be free
                // foreground, keeping patches strictly inside and separated
                for (int ny = y - 1; ny <= y + 1; ++ny)
                    for (int nx = x - 1; nx <= x + 1; ++nx) {
                        if (!mask.foreground.in_bounds(nx, ny) || !mask.is_set(nx, ny)) return false;
                        if (occupied.at(nx, ny)) return false;
                    }
            }
        return true;
    };
    auto paint = [&](int px, int py, double a, double b, double ang) {
        const int reach = static_cast<int>(std::ceil(std::max(a, b))) + 2;
        const double ca = std::cos(ang), sa = std::sin(ang);
        for (int y = py - reach; y <= py + reach; ++y)
            for (int x = px - reach; x <= px + reach; ++x) {
                const double lx = (x - px) * ca + (y - py) * sa;
                const double ly = -(x - px) * sa + (y - py) * ca;
                if ((lx / a) * (lx / a) + (ly / b) * (ly / b) > 1.0) continue;
                source.at(x, y) = 255;
                occupied.at(x, y) = 1;
            }
    };

    for (int p = 0; p < spec.n_interior_patches; ++p) {
        bool placed = false;
        for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
            const double a = stream.uniform(0.035, 0.075) * cw;
            const double b = stream.uniform(0.035, 0.075) * cw;
            const double ang = stream.uniform(0.0, std::numbers::pi);
            const int px = static_cast<int>(stream.bounded(static_cast<uint64_t>(cw)));
            const int py = static_cast<int>(stream.bounded(static_cast<uint64_t>(cw)));
            if (!fits(px, py, a, b, ang)) continue;
            paint(px, py, a, b, ang);
            placed = true;
        }
        if (!placed)
            raise(errc::spec_infeasible,
                  "could not place " + std::to_string(spec.n_interior_patches) +
                      " disjoint interior patches");
    }
    return {std::move(mask), std::move(source)};
}

// ---------------------------------------------------------------------------
// Geometric perturbations for invariance tests
// ---------------------------------------------------------------------------

struct geo_op {
    enum class kind : uint8_t { rotate, translate, scale } op = kind::translate;
    double angle_deg = 0.0; // rotate: positive is clockwise on screen
    int dx = 0, dy = 0;     // translate
    double factor = 1.0;    // scale

    static geo_op rotate(double deg) {
        geo_op g;
        g.op = kind::rotate;
        g.angle_deg = deg;
        return g;
    }
    static geo_op translate(int dx, int dy) {
        geo_op g;
        g.op = kind::translate;
        g.dx = dx;
        g.dy = dy;
        return g;
    }
    static geo_op scale(double factor) {
        geo_op g;
        g.op = kind::scale;
        g.factor = factor;
        return g;
    }
};

namespace detail {

inline bool near_integer(double v, double& out) {
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9) {
        out = r;
        return true;
    }
    return false;
}

template <typename T>
grid<T> permute_quarter_turns(const grid<T>& g, int quarter) {
    const int w = g.width(), h = g.height();
    quarter = ((quarter % 4) + 4) % 4;
    if (quarter == 0) return g;
    grid<T> out(quarter == 2 ? w : h, quarter == 2 ? h : w, T{});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int nx, ny;
            switch (quarter) {
                case 1: nx = h - 1 - y; ny = x; break;          // 90 cw
                case 2: nx = w - 1 - x; ny = h - 1 - y; break;  // 180
                default: nx = y; ny = w - 1 - x; break;         // 270 cw
            }
            out.at(nx, ny) = g.at(x, y);
        }
    return out;
}

template <typename T>
grid<T> rotate_nearest(const grid<T>& g, double deg) {
    const double rad = deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const int w = g.width(), h = g.height();
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    // forward rotation (clockwise on screen): [x'; y'] = [c -s; s c] [x; y]
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    const double corners[4][2] = {
        {0.0, 0.0}, {double(w - 1), 0.0}, {0.0, double(h - 1)}, {double(w - 1), double(h - 1)}};
    for (int i = 0; i < 4; ++i) {
        const double dx = corners[i][0] - cx, dy = corners[i][1] - cy;
        const double rx = c * dx - s * dy, ry = s * dx + c * dy;
        min_x = std::min(min_x, rx);
        max_x = std::max(max_x, rx);
        min_y = std::min(min_y, ry);
        max_y = std::max(max_y, ry);
    }
    const int ow = static_cast<int>(std::ceil(max_x - min_x)) + 1;
    const int oh = static_cast<int>(std::ceil(max_y - min_y)) + 1;
    const double ocx = (ow - 1) / 2.0, ocy = (oh - 1) / 2.0;
    grid<T> out(ow, oh, T{});
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            const double dx = x - ocx, dy = y - ocy;
            // inverse rotation back into the source grid
            const double sx = c * dx + s * dy + cx;
            const double sy = -s * dx + c * dy + cy;
            const int ix = static_cast<int>(std::lround(sx));
            const int iy = static_cast<int>(std::lround(sy));
            if (g.in_bounds(ix, iy)) out.at(x, y) = g.at(ix, iy);
        }
    return out;
}

template <typename T>
grid<T> translate_grid(const grid<T>& g, int dx, int dy, int ow, int oh, int ox, int oy) {
    grid<T> out(ow, oh, T{});
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const int nx = x + dx + ox, ny = y + dy + oy;
            if (out.in_bounds(nx, ny)) out.at(nx, ny) = g.at(x, y);
        }
    return out;
}

template <typename T>
grid<T> scale_replicate(const grid<T>& g, int factor) {
    grid<T> out(g.width() * factor, g.height() * factor, T{});
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) out.at(x, y) = g.at(x / factor, y / factor);
    return out;
}

template <typename T>
grid<T> scale_nearest(const grid<T>& g, double factor) {
    const int ow = std::max(1, static_cast<int>(std::lround(g.width() * factor)));
    const int oh = std::max(1, static_cast<int>(std::lround(g.height() * factor)));
    grid<T> out(ow, oh, T{});
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            const int ix = std::min(g.width() - 1, static_cast<int>((x + 0.5) / factor));
            const int iy = std::min(g.height() - 1, static_cast<int>((y + 0.5) / factor));
            out.at(x, y) = g.at(ix, iy);
        }
    return out;
}

} // namespace detail

/// Apply a geometric perturbation to a mask and its patch source together.
/// 90-degree multiples, integer translations, and integer upscales are exact
/// index permutations/replications; everything else uses nearest-neighbor
/// resampling. Translations grow the canvas only when the content would
/// leave it.
inline std::pair<binary_mask, gray_grid> transform_mask(const binary_mask& mask,
                                                        const gray_grid& source,
                                                        const geo_op& op) {
    if (source.width() != mask.width || source.height() != mask.height)
        raise(errc::dimension_mismatch, "patch_source dimensions differ from mask");
    binary_mask out_mask;
    gray_grid out_source;
    switch (op.op) {
        case geo_op::kind::rotate: {
            double turns = 0.0;
            const double norm = std::fmod(std::fmod(op.angle_deg, 360.0) + 360.0, 360.0);
            if (detail::near_integer(norm / 90.0, turns)) {
                const int q = static_cast<int>(turns) % 4;
                out_mask.foreground = detail::permute_quarter_turns(mask.foreground, q);
                out_source = detail::permute_quarter_turns(source, q);
            } else {
                out_mask.foreground = detail::rotate_nearest(mask.foreground, norm);
                out_source = detail::rotate_nearest(source, norm);
            }
            break;
        }
        case geo_op::kind::translate: {
            int ox = 0, oy = 0, ow = mask.width, oh = mask.height;
            // grow only if the shifted content falls outside
            if (op.dx < 0) { ox = -op.dx; ow += -op.dx; }
            else if (op.dx > 0) ow += op.dx;
            if (op.dy < 0) { oy = -op.dy; oh += -op.dy; }
            else if (op.dy > 0) oh += op.dy;
            // shrink back to the original size when everything fits
            bool fits = true;
            for (int y = 0; y < mask.height && fits; ++y)
                for (int x = 0; x < mask.width; ++x)
                    if (mask.is_set(x, y)) {
                        const int nx = x + op.dx, ny = y + op.dy;
                        if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) {
                            fits = false;
                            break;
                        }
                    }
            if (fits) {
                ox = oy = 0;
                ow = mask.width;
                oh = mask.height;
            }
            out_mask.foreground = detail::translate_grid(mask.foreground, op.dx, op.dy, ow, oh, ox, oy);
            out_source = detail::translate_grid(source, op.dx, op.dy, ow, oh, ox, oy);
            break;
        }
        case geo_op::kind::scale: {
            double f = 0.0;
            if (detail::near_integer(op.factor, f) && f >= 1.0) {
                out_mask.foreground =
                    detail::scale_replicate(mask.foreground, static_cast<int>(f));
                out_source = detail::scale_replicate(source, static_cast<int>(f));
            } else {
                out_mask.foreground = detail::scale_nearest(mask.foreground, op.factor);
                out_source = detail::scale_nearest(source, op.factor);
            }
            break;
        }
    }
    out_mask.width = out_mask.foreground.width();
    out_mask.height = out_mask.foreground.height();
    recount(out_mask);
    return {std::move(out_mask), std::move(out_source)};
}

} // namespace mort
