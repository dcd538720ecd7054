#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "honlm/image.hpp"
#include "honlm/nlm.hpp"
#include "honlm/parallel.hpp"
#include "honlm/random.hpp"
#include "honlm/regression.hpp"

namespace honlm {

struct SrParams {
    int scale = 2;          // upsampling factor p
    int patch_size = 5;     // similarity patch edge (odd), low-res steps
    int search_radius = 3;  // radial cutoff around the target, low-res units
    double sigma_r = 40.0;
    double sigma_s = 1.2;   // low-res units
    int order = 2;
    int fusion_radius = -1;  // sample-gather half-window, high-res units; -1 -> scale*(search_radius+1)
    double ridge = 0.03;     // relative Tikhonov weight (orders >= 1 only)

    void validate() const {
        if (scale < 1) throw std::invalid_argument("SrParams: scale must be >= 1");
        if (patch_size < 1 || patch_size % 2 == 0)
            throw std::invalid_argument("SrParams: patch_size must be odd and positive");
        if (search_radius < 1)
            throw std::invalid_argument("SrParams: search_radius must be >= 1");
        if (!(sigma_r > 0.0)) throw std::invalid_argument("SrParams: sigma_r must be > 0");
        if (!(sigma_s > 0.0)) throw std::invalid_argument("SrParams: sigma_s must be > 0");
        basis_width(order);
        if (fusion_radius != -1 && fusion_radius < 1)
            throw std::invalid_argument("SrParams: fusion_radius must be -1 or >= 1");
        if (!(ridge >= 0.0)) throw std::invalid_argument("SrParams: ridge must be >= 0");
    }
};

inline int effective_fusion_radius(const SrParams& sp) {
    return sp.fusion_radius < 0 ? sp.scale * (sp.search_radius + 1) : sp.fusion_radius;
}

struct DeblurParams {
    Kernel2D blur;  // point-spread function; taps must sum to 1
    double lambda = 0.05;
    double epsilon = 1e-3;
    double step = 0.1;
    int iters = 50;

    void validate() const {
        validate_kernel(blur);
        if (std::abs(blur.tap_sum() - 1.0) > 1e-8)
            throw std::invalid_argument("DeblurParams: blur taps must sum to 1");
        if (!(lambda >= 0.0)) throw std::invalid_argument("DeblurParams: lambda must be >= 0");
        if (!(epsilon > 0.0)) throw std::invalid_argument("DeblurParams: epsilon must be > 0");
        if (!(step > 0.0)) throw std::invalid_argument("DeblurParams: step must be > 0");
        if (iters < 0) throw std::invalid_argument("DeblurParams: iters must be >= 0");
    }
};

/// Pilot: separable cubic upscale of the chosen reference frame.
inline Image initial_estimate(const FrameSequence& seq, int ref_index, int p) {
    seq.validate();
    if (ref_index < 0 || ref_index >= static_cast<int>(seq.frames.size()))
        throw std::out_of_range("initial_estimate: ref_index out of range");
    return upscale_cubic(seq.frames[static_cast<std::size_t>(ref_index)], p);
}

namespace detail {

inline int floor_div(int a, int b) {
    int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline int ceil_div(int a, int b) {
    int q = a / b;
    if (a % b != 0 && a > 0) ++q;
    return q;
}

/// SSD between the stride-sampled patch of `pilot` around high-res (hr_row,
/// hr_col) and the unit-step patch of `frame` around low-res (lr_row,
/// lr_col); same traversal as patch_ssd_at so that stride 1 against equal
/// rasters reproduces it bit for bit.
inline double strided_patch_ssd(const Image& pilot, int hr_row, int hr_col, int stride,
                                const Image& frame, int lr_row, int lr_col, int size) {
    const int h = size / 2;
    double acc = 0.0;
    for (int dr = -h; dr <= h; ++dr) {
        for (int dc = -h; dc <= h; ++dc) {
            const double d = pilot.at_mirrored(hr_row + stride * dr, hr_col + stride * dc) -
                             frame.at_mirrored(lr_row + dr, lr_col + dc);
            acc += d * d;
        }
    }
    return acc;
}

}  // namespace detail

/// Fusion weight of low-res sample (lr_row, lr_col) of `frame` for the
/// high-res target (hr_row, hr_col): radial falloff on the low-res distance
/// to the target's back-projection times patch similarity against the pilot.
inline double fusion_weight(const Image& pilot, int hr_row, int hr_col, const Image& frame,
                            int lr_row, int lr_col, const SrParams& sp) {
    const double dy = static_cast<double>(hr_row) / sp.scale - lr_row;
    const double dx = static_cast<double>(hr_col) / sp.scale - lr_col;
    const double dist2 = dy * dy + dx * dx;
    const double f = radial_factor(dist2, sp.sigma_s, static_cast<double>(sp.search_radius));
    if (f == 0.0) return 0.0;
    const double ssd = detail::strided_patch_ssd(pilot, hr_row, hr_col, sp.scale, frame, lr_row,
                                                 lr_col, sp.patch_size);
    return similarity_factor(ssd, sp.sigma_r) * f;
}

struct FuseResult {
    Image image;
    int pilot_filled = 0;  // pixels that saw no positively weighted sample
};

/// Fuses all frames onto the high-res grid: every low-res sample y_t[i,j]
/// sits at (scale*i, scale*j) and enters the local polynomial fit at each
/// nearby high-res pixel with its fusion weight. Pixels whose weights all
/// vanish (similarity underflow) copy the pilot.
inline FuseResult fuse_frames(const FrameSequence& seq, const Image& pilot, const SrParams& sp,
                              int threads = 0) {
    sp.validate();
    seq.validate();
    const int p = sp.scale;
    const int lr_h = seq.frames[0].height();
    const int lr_w = seq.frames[0].width();
    if (pilot.height() != lr_h * p || pilot.width() != lr_w * p)
        throw std::invalid_argument("fuse_frames: pilot dimensions must be scale times the frames'");

    const int R = effective_fusion_radius(sp);
    const int order = sp.order;
    const int width = basis_width(order);

    FuseResult result{Image(pilot.width(), pilot.height()), 0};
    Image& out = result.image;
    std::atomic<int> filled{0};
    parallel_for(0, out.height(), threads, [&](int k) {
        std::array<double, kMaxBasisWidth> row{};
        int local_filled = 0;
        const int i_lo = std::max(0, detail::ceil_div(k - R, p));
        const int i_hi = std::min(lr_h - 1, detail::floor_div(k + R, p));
        for (int l = 0; l < out.width(); ++l) {
            const int j_lo = std::max(0, detail::ceil_div(l - R, p));
            const int j_hi = std::min(lr_w - 1, detail::floor_div(l + R, p));
            WlsAccumulator acc(width);
            for (const Image& frame : seq.frames) {
                for (int i = i_lo; i <= i_hi; ++i) {
                    for (int j = j_lo; j <= j_hi; ++j) {
                        const double w = fusion_weight(pilot, k, l, frame, i, j, sp);
                        if (w == 0.0) continue;
                        basis_row(p * i - k, p * j - l, order, row.data());
                        acc.add(row.data(), w, frame.at(i, j));
                    }
                }
            }
            if (acc.weight_sum() == 0.0) {
                out.at(k, l) = pilot.at(k, l);
                ++local_filled;
            } else {
                const double tau =
                    (order == 0 || sp.ridge == 0.0) ? 0.0 : sp.ridge * acc.normal_trace();
                out.at(k, l) = acc.solve(tau).value();
            }
        }
        if (local_filled != 0) filled.fetch_add(local_filled, std::memory_order_relaxed);
    });
    result.pilot_filled = filled.load();
    return result;
}

inline FuseResult fuse_frames(const FrameSequence& seq, const SrParams& sp, int ref_index = 0,
                              int threads = 0) {
    return fuse_frames(seq, initial_estimate(seq, ref_index, sp.scale), sp, threads);
}

/// |H x - z|^2 + lambda * TV_eps(x) with the smoothed total variation
/// TV_eps(x) = sum sqrt(dh^2 + dv^2 + eps^2) over forward differences
/// (zero at the last column / row).
inline double sr_objective(const Image& x, const Image& z_hat, const DeblurParams& dp) {
    if (x.width() != z_hat.width() || x.height() != z_hat.height())
        throw std::invalid_argument("sr_objective: image dimensions differ");
    const Image hx = convolve(x, dp.blur);
    double data = 0.0;
    for (int r = 0; r < x.height(); ++r) {
        for (int c = 0; c < x.width(); ++c) {
            const double d = hx.at(r, c) - z_hat.at(r, c);
            data += d * d;
        }
    }
    double tv = 0.0;
    const double e2 = dp.epsilon * dp.epsilon;
    for (int r = 0; r < x.height(); ++r) {
        for (int c = 0; c < x.width(); ++c) {
            const double dh = (c + 1 < x.width()) ? x.at(r, c + 1) - x.at(r, c) : 0.0;
            const double dv = (r + 1 < x.height()) ? x.at(r + 1, c) - x.at(r, c) : 0.0;
            tv += std::sqrt(dh * dh + dv * dv + e2);
        }
    }
    return data + dp.lambda * tv;
}

/// Exact gradient of sr_objective: 2 H^T (H x - z) plus lambda times the
/// smoothed-TV gradient assembled from the forward differences. H^T is the
/// true adjoint of convolve() under mirror padding (scatter form), so the
/// gradient matches finite differences of the objective at the borders too.
inline Image tv_gradient(const Image& x, const Image& z_hat, const DeblurParams& dp) {
    if (x.width() != z_hat.width() || x.height() != z_hat.height())
        throw std::invalid_argument("tv_gradient: image dimensions differ");
    const Image hx = convolve(x, dp.blur);
    Image resid(x.width(), x.height());
    for (int r = 0; r < x.height(); ++r)
        for (int c = 0; c < x.width(); ++c) resid.at(r, c) = hx.at(r, c) - z_hat.at(r, c);
    Image g = convolve_adjoint(resid, dp.blur);
    for (int r = 0; r < x.height(); ++r)
        for (int c = 0; c < x.width(); ++c) g.at(r, c) *= 2.0;

    if (dp.lambda > 0.0) {
        Image dh(x.width(), x.height()), dv(x.width(), x.height()), m(x.width(), x.height());
        const double e2 = dp.epsilon * dp.epsilon;
        for (int r = 0; r < x.height(); ++r) {
            for (int c = 0; c < x.width(); ++c) {
                const double h = (c + 1 < x.width()) ? x.at(r, c + 1) - x.at(r, c) : 0.0;
                const double v = (r + 1 < x.height()) ? x.at(r + 1, c) - x.at(r, c) : 0.0;
                dh.at(r, c) = h;
                dv.at(r, c) = v;
                m.at(r, c) = std::sqrt(h * h + v * v + e2);
            }
        }
        // d/dx(r,c) picks up its own sqrt term plus the left and upper
        // terms whose forward differences reference (r,c).
        for (int r = 0; r < x.height(); ++r) {
            for (int c = 0; c < x.width(); ++c) {
                double acc = (-dh.at(r, c) - dv.at(r, c)) / m.at(r, c);
                if (c > 0) acc += dh.at(r, c - 1) / m.at(r, c - 1);
                if (r > 0) acc += dv.at(r - 1, c) / m.at(r - 1, c);
                g.at(r, c) += dp.lambda * acc;
            }
        }
    }
    return g;
}

/// Gradient descent on sr_objective from X0 = z_hat with a fixed step that
/// halves whenever a trial update would raise the objective; the objective
/// is nonincreasing across iterations. iters == 0 returns z_hat unchanged.
inline Image tv_deblur(const Image& z_hat, const DeblurParams& dp) {
    dp.validate();
    Image x = z_hat;
    if (dp.iters == 0) return x;
    double obj = sr_objective(x, z_hat, dp);
    double step = dp.step;
    for (int it = 0; it < dp.iters; ++it) {
        const Image g = tv_gradient(x, z_hat, dp);
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            Image trial(x.width(), x.height());
            for (int r = 0; r < x.height(); ++r)
                for (int c = 0; c < x.width(); ++c)
                    trial.at(r, c) = x.at(r, c) - step * g.at(r, c);
            const double trial_obj = sr_objective(trial, z_hat, dp);
            if (trial_obj <= obj) {
                x = std::move(trial);
                obj = trial_obj;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step underflow: nothing left to gain
    }
    return x;
}

/// Full restoration chain: cubic pilot from the reference frame, then
/// sr_iters rounds of fuse + deblur, each round re-using the refined
/// estimate as the next pilot.
inline Image super_resolve(const FrameSequence& seq, const SrParams& sp, const DeblurParams& dp,
                           int ref_index = 0, int sr_iters = 1, int threads = 0) {
    sp.validate();
    dp.validate();
    if (sr_iters < 1) throw std::invalid_argument("super_resolve: sr_iters must be >= 1");

    Image pilot = initial_estimate(seq, ref_index, sp.scale);
    Image x = pilot;
    for (int round = 0; round < sr_iters; ++round) {
        FuseResult fused = fuse_frames(seq, pilot, sp, threads);
        x = tv_deblur(fused.image, dp);
        pilot = x;
    }
    return x;
}

/// Zero-mean integer shift family covering all phases modulo small scales:
/// component pattern 0, -1, 1 cycling fastest along rows.
inline std::vector<std::array<int, 2>> default_shifts(int count) {
    if (count < 1) throw std::invalid_argument("default_shifts: count must be >= 1");
    static constexpr int u[3] = {0, -1, 1};
    std::vector<std::array<int, 2>> shifts(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t)
        shifts[static_cast<std::size_t>(t)] = {u[t % 3], u[(t / 3) % 3]};
    return shifts;
}

/// Synthesizes a degraded sequence from a ground truth: per frame, integer
/// translate, blur, decimate by `scale`, then add white Gaussian noise of
/// the given sigma (one stream, frames in order, pixels row-major;
/// sigma == 0 draws nothing).
inline FrameSequence synth_degrade(const Image& truth, int scale, const Kernel2D& blur,
                                   double sigma, int count,
                                   const std::vector<std::array<int, 2>>& shifts,
                                   std::uint64_t seed) {
    if (truth.width() == 0 || truth.height() == 0)
        throw std::invalid_argument("synth_degrade: empty truth image");
    if (scale < 1) throw std::invalid_argument("synth_degrade: scale must be >= 1");
    validate_kernel(blur);
    if (!(sigma >= 0.0)) throw std::invalid_argument("synth_degrade: sigma must be >= 0");
    if (count < 1) throw std::invalid_argument("synth_degrade: count must be >= 1");
    if (static_cast<int>(shifts.size()) != count)
        throw std::invalid_argument("synth_degrade: shifts size must equal count");

    GaussianStream noise(seed);
    FrameSequence seq;
    seq.frames.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        const auto& s = shifts[static_cast<std::size_t>(t)];
        Image lr = decimate(convolve(translate(truth, s[0], s[1]), blur), scale);
        if (sigma > 0.0) {
            for (int r = 0; r < lr.height(); ++r)
                for (int c = 0; c < lr.width(); ++c) lr.at(r, c) += sigma * noise.next();
        }
        seq.frames.push_back(std::move(lr));
    }
    return seq;
}

}  // namespace honlm
