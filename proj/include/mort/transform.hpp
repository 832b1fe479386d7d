#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "mort/contour.hpp"
#include "mort/distance_map.hpp"
#include "mort/error.hpp"
#include "mort/grid.hpp"
#include "mort/mask.hpp"
#include "mort/parallel.hpp"
#include "mort/patches.hpp"

namespace mort {

/// Integration slab for one (contour point, scale) pair: the band of pixels
/// whose projection onto the chord direction theta falls between the
/// projections of the chord endpoints. The sweep coordinate orthogonal to
/// theta is unrestricted.
struct slab_spec {
    double theta = 0.0;     // chord direction, in [0, 2*pi)
    double lambda_lo = 0.0; // projection bounds along (cos theta, sin theta)
    double lambda_hi = 0.0;
};

/// Interior and complementary coefficient matrices, (Q+1) x N with
/// Q = log2(N). Row t holds the region integrals at scale t as the contour
/// point sweeps all N samples; row 0 is constant (whole-region integral).
struct mort_matrices {
    matrix mt_interior;
    matrix mt_complementary;
    int n = 0;
    int q = 0;
    int64_t area = 0; // pixels enclosed in the outer contour (N_f)

    friend bool operator==(const mort_matrices& a, const mort_matrices& b) {
        return a.n == b.n && a.q == b.q && a.area == b.area &&
               a.mt_interior == b.mt_interior && a.mt_complementary == b.mt_complementary;
    }
};

/// Final feature descriptor: per-row DFT magnitudes of the coefficient
/// matrices, orders k = 1..M (DC excluded), scaled by 1/N. Row 0 is flat at
/// numerical zero because the source row is constant.
struct mort_descriptor {
    matrix psi_interior;
    matrix psi_complementary;
    int m = 0;
    int n = 0;             // sample count of the source matrices
    bool normalized = false; // divided by shape area before the transform

    friend bool operator==(const mort_descriptor& a, const mort_descriptor& b) {
        return a.m == b.m && a.n == b.n && a.normalized == b.normalized &&
               a.psi_interior == b.psi_interior && a.psi_complementary == b.psi_complementary;
    }
};

inline int log2_exact(int n) {
    int q = 0;
    while ((1 << q) < n) ++q;
    return q;
}

/// Build the slab for contour sample u at scale t >= 1. The chord runs from
/// p(u) clockwise to p(e) with e = (u + N/2^t) mod N; theta is the chord
/// direction and the lambda bounds are the ordered endpoint projections.
inline slab_spec slab_for(const sampled_contour& contour, int u, int t) {
    const int n = contour.n;
    const int q = log2_exact(n);
    if (t < 1 || t > q)
        raise(errc::scale_out_of_range, "scale index must be in [1, log2(N)]");
    if (u < 0 || u >= n)
        raise(errc::index_out_of_range, "contour sample index out of range");

    const int e = (u + (n >> t)) % n;
    const point_d pu = contour.points[u];
    const point_d pe = contour.points[e];
    double theta = std::atan2(pe.y - pu.y, pe.x - pu.x);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    if (theta >= 2.0 * std::numbers::pi) theta = 0.0;

    const double c = std::cos(theta), s = std::sin(theta);
    const double proj_u = pu.x * c + pu.y * s;
    const double proj_e = pe.x * c + pe.y * s;
    slab_spec slab;
    slab.theta = theta;
    slab.lambda_lo = std::min(proj_u, proj_e);
    slab.lambda_hi = std::max(proj_u, proj_e);
    return slab;
}

namespace detail {

/// Pixel-center slab membership uses inclusive bounds with a fixed epsilon
/// so ties on a bounding line resolve deterministically.
constexpr double slab_eps = 1e-9;

struct support_pixel {
    int x;
    int y;
    double fi;
    double fc;
};

/// Row-major list of pixels carrying patch mass. Because every support pixel
/// belongs to a patch with a positive normalized distance, this is exactly
/// the set of pixels enclosed in the outer contour.
inline std::vector<support_pixel> collect_support(const patchy_distance_map& pdm) {
    std::vector<support_pixel> out;
    for (int y = 0; y < pdm.height; ++y)
        for (int x = 0; x < pdm.width; ++x) {
            const double fi = pdm.f_interior.at(x, y);
            const double fc = pdm.f_complementary.at(x, y);
            if (fi > 0.0 || fc > 0.0) out.push_back({x, y, fi, fc});
        }
    return out;
}

inline std::pair<double, double> slab_sum(const std::vector<support_pixel>& support,
                                          const slab_spec& slab) {
    const double c = std::cos(slab.theta), s = std::sin(slab.theta);
    const double lo = slab.lambda_lo - slab_eps, hi = slab.lambda_hi + slab_eps;
    double ri = 0.0, rc = 0.0;
    for (const support_pixel& p : support) {
        const double proj = p.x * c + p.y * s;
        if (proj >= lo && proj <= hi) {
            ri += p.fi;
            rc += p.fc;
        }
    }
    return {ri, rc};
}

inline std::pair<double, double> whole_sum(const std::vector<support_pixel>& support) {
    double ri = 0.0, rc = 0.0;
    for (const support_pixel& p : support) {
        ri += p.fi;
        rc += p.fc;
    }
    return {ri, rc};
}

} // namespace detail

/// Region integral at contour sample u and scale t: the sums of interior and
/// complementary PDM values over the slab pixels (whole grid when t = 0).
inline std::pair<double, double> region_integral(const patchy_distance_map& pdm,
                                                 const sampled_contour& contour, int u, int t) {
    const int q = log2_exact(contour.n);
    if (t < 0 || t > q)
        raise(errc::scale_out_of_range, "scale index must be in [0, log2(N)]");
    if (u < 0 || u >= contour.n)
        raise(errc::index_out_of_range, "contour sample index out of range");
    const auto support = detail::collect_support(pdm);
    if (t == 0) return detail::whole_sum(support);
    return detail::slab_sum(support, slab_for(contour, u, t));
}

/// Compute the full coefficient matrices: entry (t, i) is the region
/// integral at sample i and scale t. Each support pixel is tested against
/// every slab, so the cost is O(N_f * N * log2 N). Entries are independent;
/// with threads > 1 columns are distributed across workers and results are
/// identical to the serial order.
inline mort_matrices compute_mort(const patchy_distance_map& pdm,
                                  const sampled_contour& contour, int threads = 1) {
    const int n = contour.n;
    if (n < 4 || (n & (n - 1)) != 0)
        raise(errc::not_power_of_two, "contour sample count must be a power of two >= 4");
    const int q = log2_exact(n);

    mort_matrices mt;
    mt.n = n;
    mt.q = q;
    mt.mt_interior = matrix(q + 1, n, 0.0);
    mt.mt_complementary = matrix(q + 1, n, 0.0);

    const auto support = detail::collect_support(pdm);
    mt.area = static_cast<int64_t>(support.size());

    const auto [wi, wc] = detail::whole_sum(support);
    for (int i = 0; i < n; ++i) {
        mt.mt_interior.at(0, i) = wi;
        mt.mt_complementary.at(0, i) = wc;
    }

    parallel_for(n, threads, [&](int i) {
        for (int t = 1; t <= q; ++t) {
            const auto [ri, rc] = detail::slab_sum(support, slab_for(contour, i, t));
            mt.mt_interior.at(t, i) = ri;
            mt.mt_complementary.at(t, i) = rc;
        }
    });
    return mt;
}

/// Per-row DFT magnitudes, orders k = 1..m, scaled by 1/N. With
/// normalize_area set, matrix entries are divided by the shape area first,
/// which cancels the gamma^2 factor a gamma-fold scaling applies to raw
/// entries. Direct O(N*M) summation per row; M is small by construction.
inline mort_descriptor dft_descriptor(const mort_matrices& mt, int m, bool normalize_area) {
    if (m < 1 || m >= mt.n)
        raise(errc::order_out_of_range, "descriptor order count must satisfy 1 <= m < n");

    const int n = mt.n;
    const int rows = mt.q + 1;
    const double scale = normalize_area ? 1.0 / static_cast<double>(mt.area) : 1.0;

    mort_descriptor desc;
    desc.m = m;
    desc.n = n;
    desc.normalized = normalize_area;
    desc.psi_interior = matrix(rows, m, 0.0);
    desc.psi_complementary = matrix(rows, m, 0.0);

    const double step = -2.0 * std::numbers::pi / n;
    for (const auto* pair : {&mt.mt_interior, &mt.mt_complementary}) {
        matrix& out = pair == &mt.mt_interior ? desc.psi_interior : desc.psi_complementary;
        for (int t = 0; t < rows; ++t) {
            const double* row = pair->row(t);
            for (int k = 1; k <= m; ++k) {
                double re = 0.0, im = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double ang = step * i * k;
                    const double v = row[i] * scale;
                    re += v * std::cos(ang);
                    im += v * std::sin(ang);
                }
                out.at(t, k - 1) = std::sqrt(re * re + im * im) / n;
            }
        }
    }
    return desc;
}

/// Full pipeline from a binary mask and patch source to the descriptor.
/// Coordinates are canonicalized to the foreground bounding box first, so
/// integer translations of the input yield bit-identical results; the shape
/// support is the filled outer contour of the largest component.
inline mort_descriptor extract_descriptor(const binary_mask& mask, const gray_grid& patch_source,
                                          patch_policy policy, int n, int m, bool normalize_area,
                                          int threads = 1) {
    auto [cropped, source] = crop_to_foreground(mask, patch_source);
    const binary_mask support = filled_support(cropped);
    const contour outline = extract_contour(support);
    const sampled_contour sampled = resample_contour(outline, n);
    const patch_label_map labels = segment_patches(support, source, policy);
    const patchy_distance_map pdm = compute_pdm(labels);
    const mort_matrices mt = compute_mort(pdm, sampled, threads);
    return dft_descriptor(mt, m, normalize_area);
}

/// Matrices-level variant of the pipeline, for callers that need the raw
/// coefficients (invariance audits, scale checks).
inline mort_matrices extract_matrices(const binary_mask& mask, const gray_grid& patch_source,
                                      patch_policy policy, int n, int threads = 1) {
    auto [cropped, source] = crop_to_foreground(mask, patch_source);
    const binary_mask support = filled_support(cropped);
    const contour outline = extract_contour(support);
    const sampled_contour sampled = resample_contour(outline, n);
    const patch_label_map labels = segment_patches(support, source, policy);
    const patchy_distance_map pdm = compute_pdm(labels);
    return compute_mort(pdm, sampled, threads);
}

} // namespace mort
