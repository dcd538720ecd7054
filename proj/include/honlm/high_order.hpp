#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>

#include "honlm/image.hpp"
#include "honlm/nlm.hpp"
#include "honlm/parallel.hpp"
#include "honlm/regression.hpp"

namespace honlm {

struct HonlmParams {
    NlmParams nlm;
    int order = 2;
    // Relative Tikhonov weight: the solve uses tau = ridge * trace(X^T W X).
    // Order 0 is never ridged, keeping it identical to classic NLM.
    double ridge = 1e-8;

    void validate() const {
        honlm::validate(nlm);
        basis_width(order);  // throws on bad order
        if (!(ridge >= 0.0))
            throw std::invalid_argument("HonlmParams: ridge must be >= 0");
    }
};

/// Nonlocal regression weight between pixels (as NLM, the kernel role is
/// played by patch similarity times the radial factor).
inline double honlm_weight(const Image& img, int center_row, int center_col,
                           int row, int col, const NlmParams& p) {
    return nlm_weight(img, center_row, center_col, row, col, p);
}

/// High-order nonlocal means: per pixel, fits a local polynomial of the
/// configured order over the (border-clipped) search window with NLM weights
/// and keeps the constant term. Order 0 reproduces nlm_denoise exactly.
inline Image honlm_denoise(const Image& img, const HonlmParams& params, int threads = 0) {
    params.validate();
    if (img.width() == 0 || img.height() == 0)
        throw std::invalid_argument("honlm_denoise: empty image");
    const NlmParams& p = params.nlm;
    const int r = p.search_radius;
    const int order = params.order;
    const int width = basis_width(order);

    Image out(img.width(), img.height());
    parallel_for(0, img.height(), threads, [&](int k) {
        std::array<double, kMaxBasisWidth> row{};
        const int i_lo = std::max(0, k - r);
        const int i_hi = std::min(img.height() - 1, k + r);
        for (int l = 0; l < img.width(); ++l) {
            const int j_lo = std::max(0, l - r);
            const int j_hi = std::min(img.width() - 1, l + r);
            WlsAccumulator acc(width);
            for (int i = i_lo; i <= i_hi; ++i) {
                for (int j = j_lo; j <= j_hi; ++j) {
                    const double w = detail::nlm_weight_unchecked(img, k, l, i, j, p);
                    basis_row(i - k, j - l, order, row.data());
                    acc.add(row.data(), w, img.at(i, j));
                }
            }
            const double tau =
                (order == 0 || params.ridge == 0.0) ? 0.0 : params.ridge * acc.normal_trace();
            out.at(k, l) = acc.solve(tau).value();
        }
    });
    return out;
}

}  // namespace honlm
