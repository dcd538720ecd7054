#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "honlm/bench.hpp"
#include "honlm/high_order.hpp"
#include "honlm/metrics.hpp"
#include "honlm/superres.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using honlm::DeblurParams;
using honlm::FrameSequence;
using honlm::Image;
using honlm::SrParams;

namespace {

SrParams small_sr(int scale, int order) {
    SrParams sp;
    sp.scale = scale;
    sp.patch_size = 3;
    sp.search_radius = 2;
    sp.sigma_r = 40.0;
    sp.sigma_s = 1.5;
    sp.order = order;
    return sp;
}

DeblurParams identity_deblur() {
    DeblurParams dp;
    dp.blur = honlm::identity_kernel();
    dp.lambda = 0.0;
    dp.iters = 0;
    return dp;
}

FrameSequence wrap(Image img) {
    FrameSequence seq;
    seq.frames.push_back(std::move(img));
    return seq;
}

}  // namespace

TEST_CASE("superres parameter validation") {
    SrParams sp = small_sr(2, 2);
    CHECK_NOTHROW(sp.validate());
    sp.scale = 0;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = small_sr(2, 2);
    sp.patch_size = 4;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = small_sr(2, 2);
    sp.order = 5;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = small_sr(2, 2);
    sp.fusion_radius = 0;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp.fusion_radius = -1;
    CHECK(honlm::effective_fusion_radius(sp) == 2 * (sp.search_radius + 1));
    sp.fusion_radius = 7;
    CHECK(honlm::effective_fusion_radius(sp) == 7);

    DeblurParams dp = identity_deblur();
    CHECK_NOTHROW(dp.validate());
    dp.lambda = -0.1;
    CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
    dp = identity_deblur();
    dp.epsilon = 0.0;
    CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
    dp = identity_deblur();
    dp.step = 0.0;
    CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
    dp = identity_deblur();
    dp.iters = -1;
    CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
    dp = identity_deblur();
    dp.blur = honlm::Kernel2D{1, {0.5}};  // DC gain != 1
    CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
}

TEST_CASE("initial estimate") {
    const Image img = testutil::random_image(8, 6, 7);
    FrameSequence seq;
    seq.frames.push_back(testutil::random_image(8, 6, 8));
    seq.frames.push_back(img);

    SECTION("scale 1 copies the reference frame") {
        CHECK(honlm::initial_estimate(seq, 1, 1) == img);
    }
    SECTION("scale 2 upscales the reference frame") {
        CHECK(honlm::initial_estimate(seq, 1, 2) == honlm::upscale_cubic(img, 2));
    }
    SECTION("bad reference index") {
        CHECK_THROWS_AS(honlm::initial_estimate(seq, 2, 1), std::out_of_range);
        CHECK_THROWS_AS(honlm::initial_estimate(seq, -1, 1), std::out_of_range);
    }
}

TEST_CASE("fusion weight basics") {
    const Image hr = honlm::synthetic_scene(16, 16);
    const Image lr = honlm::decimate(hr, 2);
    SrParams sp = small_sr(2, 2);

    SECTION("scale 1 against itself gives weight one at the same pixel") {
        SrParams s1 = small_sr(1, 0);
        CHECK(honlm::fusion_weight(hr, 5, 5, hr, 5, 5, s1) == 1.0);
    }
    SECTION("beyond the radial cutoff the weight vanishes") {
        // low-res distance 3 > search_radius 2
        CHECK(honlm::fusion_weight(hr, 8, 8, lr, 4 + 3, 4, sp) == 0.0);
    }
    SECTION("the aligned sample maximizes the weight on exact decimations") {
        const int k = 8, l = 6;  // aligned with low-res (4, 3)
        const double aligned = honlm::fusion_weight(hr, k, l, lr, k / 2, l / 2, sp);
        CHECK(aligned == 1.0);  // SSD 0 and distance 0
        for (int i = 0; i < lr.height(); ++i)
            for (int j = 0; j < lr.width(); ++j)
                CHECK(honlm::fusion_weight(hr, k, l, lr, i, j, sp) <= aligned);
    }
}

TEST_CASE("single-frame scale-1 fusion reduces to high-order nlm") {
    const Image img = testutil::random_image(14, 12, 20);
    for (int order : {0, 1, 2}) {
        SrParams sp = small_sr(1, order);
        const honlm::FuseResult fused = honlm::fuse_frames(wrap(img), img, sp);
        honlm::HonlmParams hp;
        hp.nlm.patch_size = sp.patch_size;
        hp.nlm.search_radius = sp.search_radius;
        hp.nlm.sigma_r = sp.sigma_r;
        hp.nlm.sigma_s = sp.sigma_s;
        hp.order = order;
        hp.ridge = sp.ridge;
        const Image direct = honlm::honlm_denoise(img, hp);
        CHECK(fused.pilot_filled == 0);
        REQUIRE(testutil::max_abs_diff(fused.image, direct) <= 1e-9);
        CHECK(fused.image == direct);
    }
}

TEST_CASE("constant frames fuse to the constant") {
    const Image c(6, 6, 64.0);
    FrameSequence seq;
    for (int t = 0; t < 3; ++t) seq.frames.push_back(c);
    for (int order : {0, 1, 2}) {
        SrParams sp = small_sr(2, order);
        sp.ridge = 0.0;
        const honlm::FuseResult fused = honlm::fuse_frames(seq, sp, 0);
        CHECK(fused.pilot_filled == 0);
        CHECK(testutil::max_abs_diff(fused.image, Image(12, 12, 64.0)) < 1e-9);
    }
}

TEST_CASE("order-0 fusion stays within the sample range") {
    FrameSequence seq;
    for (std::uint64_t s : {31, 32, 33}) seq.frames.push_back(testutil::random_image(8, 8, s, 10.0, 90.0));
    SrParams sp = small_sr(2, 0);
    const honlm::FuseResult fused = honlm::fuse_frames(seq, sp, 1);
    for (int r = 0; r < fused.image.height(); ++r)
        for (int c = 0; c < fused.image.width(); ++c) {
            CHECK(fused.image.at(r, c) >= 10.0 - 1e-9);
            CHECK(fused.image.at(r, c) <= 90.0 + 1e-9);
        }
}

TEST_CASE("similarity underflow falls back to the pilot") {
    // denormal-small sigma_r drives every nonzero-SSD similarity to zero
    FrameSequence seq;
    seq.frames.push_back(testutil::random_image(6, 6, 40));
    SrParams sp = small_sr(2, 0);
    sp.sigma_r = 1e-300;
    sp.search_radius = 1;
    const Image pilot = testutil::random_image(12, 12, 41);
    const honlm::FuseResult fused = honlm::fuse_frames(seq, pilot, sp);
    CHECK(fused.pilot_filled == 12 * 12);
    CHECK(fused.image == pilot);
}

TEST_CASE("fuse rejects malformed input") {
    SrParams sp = small_sr(2, 1);
    FrameSequence empty;
    CHECK_THROWS_AS(honlm::fuse_frames(empty, sp, 0), std::invalid_argument);
    FrameSequence seq = wrap(testutil::random_image(6, 6, 1));
    const Image bad_pilot(11, 12, 0.0);  // not scale * frame size
    CHECK_THROWS_AS(honlm::fuse_frames(seq, bad_pilot, sp), std::invalid_argument);
    CHECK_THROWS_AS(honlm::fuse_frames(seq, sp, 5), std::out_of_range);
}

TEST_CASE("sr objective closed form on a tiny instance") {
    // 1x2 image, identity blur: data term plus epsilon-smoothed TV
    const Image x(2, 1, std::vector<double>{3.0, 7.0});
    const Image z(2, 1, std::vector<double>{1.0, 5.0});
    DeblurParams dp = identity_deblur();
    dp.lambda = 0.25;
    dp.epsilon = 0.5;
    // data: (3-1)^2 + (7-5)^2 = 8; TV: pixel (0,0) has dh=4, dv=0 (last row)
    // -> sqrt(16+0.25); pixel (0,1) is the last column -> sqrt(0.25)
    const double want = 8.0 + 0.25 * (std::sqrt(16.25) + std::sqrt(0.25));
    CHECK(honlm::sr_objective(x, z, dp) == Catch::Approx(want).epsilon(1e-14));
}

TEST_CASE("tv gradient closed forms") {
    SECTION("zero at the trivial stationary point") {
        const Image z = testutil::random_image(7, 7, 50);
        DeblurParams dp = identity_deblur();
        const Image g = honlm::tv_gradient(z, z, dp);
        CHECK(testutil::max_abs_diff(g, Image(7, 7, 0.0)) == 0.0);
    }
    SECTION("TV term vanishes identically on constants") {
        const Image x(6, 5, 9.0);
        const Image z = testutil::random_image(6, 5, 51);
        DeblurParams a = identity_deblur();
        DeblurParams b = identity_deblur();
        b.lambda = 2.5;
        CHECK(honlm::tv_gradient(x, z, a) == honlm::tv_gradient(x, z, b));
    }
}

TEST_CASE("tv gradient matches finite differences of the objective") {
    honlm::SplitMix64 rng(60);
    int instance = 0;
    for (double lambda : {0.0, 0.1, 1.0}) {
        for (int ksize : {1, 3}) {
            DeblurParams dp;
            dp.lambda = lambda;
            dp.epsilon = 0.1;
            if (ksize == 1) {
                dp.blur = honlm::identity_kernel();
            } else {
                honlm::Kernel2D k{3, std::vector<double>(9)};
                double sum = 0.0;
                for (double& t : k.taps) sum += (t = 0.1 + rng.next_unit());
                for (double& t : k.taps) t /= sum;
                dp.blur = k;
            }
            const Image x = testutil::random_image(8, 8, 70 + instance, 0.0, 1.0);
            const Image z = testutil::random_image(8, 8, 80 + instance, 0.0, 1.0);
            ++instance;
            const Image analytic = honlm::tv_gradient(x, z, dp);
            const Image fd = oracle::fd_gradient(
                x, [&](const Image& probe) { return honlm::sr_objective(probe, z, dp); });
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 8; ++c) {
                    const double a = analytic.at(r, c);
                    const double f = fd.at(r, c);
                    const double rel = std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-3});
                    CHECK(rel < 1e-5);
                }
        }
    }
}

TEST_CASE("tv deblur basics") {
    const Image z = testutil::random_image(10, 10, 90);

    SECTION("zero iterations returns the input untouched") {
        DeblurParams dp;
        dp.blur = honlm::uniform_kernel(3);
        dp.iters = 0;
        CHECK(honlm::tv_deblur(z, dp) == z);
    }
    SECTION("identity blur with no regularizer is a fixed point") {
        DeblurParams dp = identity_deblur();
        dp.iters = 5;
        CHECK(honlm::tv_deblur(z, dp) == z);
    }
    SECTION("the objective never increases along the iterations") {
        DeblurParams dp;
        dp.blur = honlm::gaussian_kernel(0.8);
        dp.lambda = 0.05;
        dp.step = 0.05;
        const Image blurred = honlm::convolve(honlm::synthetic_scene(16, 16), dp.blur);
        double prev = std::numeric_limits<double>::infinity();
        for (int iters : {0, 1, 2, 4, 8, 16}) {
            dp.iters = iters;
            const Image x = honlm::tv_deblur(blurred, dp);
            const double obj = honlm::sr_objective(x, blurred, dp);
            CHECK(obj <= prev + 1e-9);
            prev = obj;
        }
    }
    SECTION("deblurring a blurred scene improves psnr") {
        const Image sharp = honlm::synthetic_scene(24, 24);
        DeblurParams dp;
        dp.blur = honlm::uniform_kernel(3);
        dp.lambda = 0.01;
        dp.step = 0.05;
        dp.iters = 80;
        const Image blurred = honlm::convolve(sharp, dp.blur);
        const Image restored = honlm::tv_deblur(blurred, dp);
        CHECK(honlm::psnr(restored, sharp) > honlm::psnr(blurred, sharp) + 1.0);
    }
}

TEST_CASE("super_resolve with a trivial chain equals honlm denoising") {
    const Image img = testutil::random_image(16, 14, 95);
    SrParams sp = small_sr(1, 2);
    const DeblurParams dp = identity_deblur();
    const Image out = honlm::super_resolve(wrap(img), sp, dp, 0, 1);

    honlm::HonlmParams hp;
    hp.nlm.patch_size = sp.patch_size;
    hp.nlm.search_radius = sp.search_radius;
    hp.nlm.sigma_r = sp.sigma_r;
    hp.nlm.sigma_s = sp.sigma_s;
    hp.order = sp.order;
    hp.ridge = sp.ridge;
    REQUIRE(testutil::max_abs_diff(out, honlm::honlm_denoise(img, hp)) <= 1e-9);

    CHECK_THROWS_AS(honlm::super_resolve(wrap(img), sp, dp, 0, 0), std::invalid_argument);
}

TEST_CASE("default shifts are zero-mean and start at the origin") {
    const auto shifts = honlm::default_shifts(9);
    REQUIRE(shifts.size() == 9);
    CHECK(shifts[0] == std::array<int, 2>{0, 0});
    int sum0 = 0, sum1 = 0;
    for (const auto& s : shifts) {
        sum0 += s[0];
        sum1 += s[1];
    }
    CHECK(sum0 == 0);
    CHECK(sum1 == 0);
    // all nine phase pairs over {0,-1,1} appear exactly once
    for (int a : {0, -1, 1})
        for (int b : {0, -1, 1})
            CHECK(std::count(shifts.begin(), shifts.end(), std::array<int, 2>{a, b}) == 1);
    CHECK_THROWS_AS(honlm::default_shifts(0), std::invalid_argument);
}

TEST_CASE("synth_degrade") {
    const Image truth = honlm::synthetic_scene(12, 12);

    SECTION("clean settings produce exact copies") {
        const auto seq = honlm::synth_degrade(truth, 1, honlm::identity_kernel(), 0.0, 3,
                                              {{{0, 0}, {0, 0}, {0, 0}}}, 5);
        REQUIRE(seq.count() == 3);
        for (const Image& f : seq.frames) CHECK(f == truth);
    }
    SECTION("scale 2 decimates exactly") {
        const auto seq = honlm::synth_degrade(truth, 2, honlm::identity_kernel(), 0.0, 1,
                                              {{{0, 0}}}, 5);
        CHECK(seq.frames[0] == honlm::decimate(truth, 2));
    }
    SECTION("shifts are applied before blurring") {
        const auto seq = honlm::synth_degrade(truth, 1, honlm::identity_kernel(), 0.0, 2,
                                              {{{0, 0}, {1, -1}}}, 5);
        CHECK(seq.frames[1] == honlm::translate(truth, 1, -1));
    }
    SECTION("fixed seed reproduces the noise exactly") {
        const auto a = honlm::synth_degrade(truth, 2, honlm::uniform_kernel(3), 4.0, 3,
                                            honlm::default_shifts(3), 77);
        const auto b = honlm::synth_degrade(truth, 2, honlm::uniform_kernel(3), 4.0, 3,
                                            honlm::default_shifts(3), 77);
        const auto c = honlm::synth_degrade(truth, 2, honlm::uniform_kernel(3), 4.0, 3,
                                            honlm::default_shifts(3), 78);
        for (int t = 0; t < 3; ++t) CHECK(a.frames[t] == b.frames[t]);
        CHECK(a.frames[0] != c.frames[0]);
    }
    SECTION("contract violations") {
        CHECK_THROWS_AS(honlm::synth_degrade(truth, 1, honlm::identity_kernel(), 0.0, 2,
                                             {{{0, 0}}}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(honlm::synth_degrade(truth, 0, honlm::identity_kernel(), 0.0, 1,
                                             {{{0, 0}}}, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(honlm::synth_degrade(truth, 1, honlm::identity_kernel(), -1.0, 1,
                                             {{{0, 0}}}, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("bench scaffolding") {
    CHECK(honlm::bench_ref_indices(9, 3) == std::vector<int>{0, 4, 8});
    CHECK(honlm::bench_ref_indices(9, 1) == std::vector<int>{0});
    CHECK(honlm::bench_ref_indices(5, 5) == std::vector<int>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(honlm::bench_ref_indices(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(honlm::bench_ref_indices(3, 0), std::invalid_argument);

    const Image scene = honlm::synthetic_scene(32, 24);
    CHECK(scene.width() == 32);
    CHECK(scene.height() == 24);
    for (int r = 0; r < scene.height(); ++r)
        for (int c = 0; c < scene.width(); ++c) {
            CHECK(scene.at(r, c) >= 0.0);
            CHECK(scene.at(r, c) <= 255.0);
        }
    // deterministic: the scene is a fixed analytic function of (x, y)
    CHECK(honlm::synthetic_scene(32, 24) == scene);
}
