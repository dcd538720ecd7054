#pragma once

#include <cmath>
#include <stdexcept>

#include "honlm/image.hpp"
#include "honlm/parallel.hpp"

namespace honlm {

/// Patch-similarity filter parameters. sigma_r scales patch distances
/// (radiometric bandwidth); sigma_s and search_radius shape the geometric
/// falloff. The search window is the (2r+1)^2 box around each pixel; weights
/// vanish beyond Euclidean distance search_radius inside it.
struct NlmParams {
    int patch_size = 7;      // q, odd
    int search_radius = 10;  // r
    double sigma_r = 50.0;
    double sigma_s = 5.0;
};

inline void validate(const NlmParams& p) {
    if (p.patch_size < 1 || p.patch_size % 2 == 0)
        throw std::invalid_argument("NlmParams: patch_size must be odd and >= 1");
    if (p.search_radius < 0)
        throw std::invalid_argument("NlmParams: search_radius must be >= 0");
    if (!(p.sigma_r > 0.0) || !(p.sigma_s > 0.0))
        throw std::invalid_argument("NlmParams: sigma_r and sigma_s must be positive");
}

/// Radiometric factor exp(-ssd / (2 sigma_r^2)).
inline double similarity_factor(double ssd, double sigma_r) {
    return std::exp(-ssd / (2.0 * sigma_r * sigma_r));
}

/// Geometric factor: Gaussian in distance, truncated to zero beyond the
/// cutoff (monotonically non-increasing). Takes the squared distance.
inline double radial_factor(double dist2, double sigma_s, double cutoff) {
    if (dist2 > cutoff * cutoff) return 0.0;
    return std::exp(-dist2 / (2.0 * sigma_s * sigma_s));
}

namespace detail {

/// nlm_weight without parameter/bounds validation, for prevalidated loops.
inline double nlm_weight_unchecked(const Image& img, int center_row, int center_col,
                                   int row, int col, const NlmParams& p) {
    const double dr = center_row - row;
    const double dc = center_col - col;
    const double f = radial_factor(dr * dr + dc * dc, p.sigma_s,
                                   static_cast<double>(p.search_radius));
    if (f == 0.0) return 0.0;
    const double ssd = patch_ssd_at(img, center_row, center_col, row, col, p.patch_size);
    return similarity_factor(ssd, p.sigma_r) * f;
}

}  // namespace detail

/// Weight of pixel (row, col) relative to the center pixel: radiometric
/// patch similarity times the geometric falloff. The self weight is 1.
inline double nlm_weight(const Image& img, int center_row, int center_col,
                         int row, int col, const NlmParams& p) {
    validate(p);
    if (!img.in_bounds(center_row, center_col) || !img.in_bounds(row, col))
        throw std::out_of_range("nlm_weight: coordinates outside image bounds");
    return detail::nlm_weight_unchecked(img, center_row, center_col, row, col, p);
}

/// Classic nonlocal-means: each output pixel is the weight-normalized sum
/// over its search window. The window is clipped at the image border; the
/// denominator is always >= 1 because the self weight is 1.
inline Image nlm_denoise(const Image& img, const NlmParams& p, int threads = 0) {
    validate(p);
    if (img.empty()) throw std::invalid_argument("nlm_denoise: empty image");
    Image out(img.width(), img.height());
    const int r = p.search_radius;
    parallel_for(0, img.height(), threads, [&](int k) {
        const int i_lo = std::max(0, k - r);
        const int i_hi = std::min(img.height() - 1, k + r);
        for (int l = 0; l < img.width(); ++l) {
            const int j_lo = std::max(0, l - r);
            const int j_hi = std::min(img.width() - 1, l + r);
            double num = 0.0, den = 0.0;
            for (int i = i_lo; i <= i_hi; ++i)
                for (int j = j_lo; j <= j_hi; ++j) {
                    const double w = detail::nlm_weight_unchecked(img, k, l, i, j, p);
                    num += w * img.at(i, j);
                    den += w;
                }
            out.at(k, l) = num / den;
        }
    });
    return out;
}

}  // namespace honlm
