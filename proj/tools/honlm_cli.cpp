// Command-line front end: denoise / upscale / synth / psnr / bench.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "honlm/honlm.hpp"

namespace {

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(':', pos);
        if (next == std::string::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

/// Blur spec grammar: none | uniform:K | gaussian:SIGMA[:K].
honlm::Kernel2D parse_blur_spec(const std::string& spec) {
    if (spec == "none") return honlm::identity_kernel();
    const auto parts = split_colon(spec);
    const auto to_int = [](const std::string& v) {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument("blur: bad integer '" + v + "'");
        return x;
    };
    const auto to_double = [](const std::string& v) {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("blur: bad number '" + v + "'");
        return x;
    };
    if (parts.size() == 2 && parts[0] == "uniform") return honlm::uniform_kernel(to_int(parts[1]));
    if (parts.size() == 2 && parts[0] == "gaussian")
        return honlm::gaussian_kernel(to_double(parts[1]));
    if (parts.size() == 3 && parts[0] == "gaussian")
        return honlm::gaussian_kernel(to_double(parts[1]), to_int(parts[2]));
    throw std::invalid_argument("blur: expected none, uniform:K or gaussian:SIGMA[:K]");
}

CLI::Validator blur_spec_validator() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                parse_blur_spec(s);
                return {};
            } catch (const std::exception& e) {
                return e.what();
            }
        },
        "none|uniform:K|gaussian:SIGMA[:K]", "BLURSPEC");
}

struct DenoiseOpts {
    std::string input, output;
    int order = 2;
    bool classic = false;
    honlm::NlmParams nlm;
    double ridge = 1e-8;
    int threads = 0;
};

int run_denoise(const DenoiseOpts& o) {
    const honlm::Image img = honlm::read_pgm(o.input);
    honlm::Image out;
    if (o.classic) {
        out = honlm::nlm_denoise(img, o.nlm, o.threads);
    } else {
        honlm::HonlmParams hp;
        hp.nlm = o.nlm;
        hp.order = o.order;
        hp.ridge = o.ridge;
        out = honlm::honlm_denoise(img, hp, o.threads);
    }
    honlm::write_pgm(out, o.output);
    return 0;
}

struct UpscaleOpts {
    std::string pattern, output;
    honlm::SrParams sr;
    std::string blur = "uniform:3";
    double lambda = 0.05;
    double epsilon = 1e-3;
    double step = 0.1;
    int iters = 50;
    int sr_iters = 1;
    int ref = 0;
    int threads = 0;
};

int run_upscale(const UpscaleOpts& o) {
    const honlm::FrameSequence seq =
        honlm::load_sequence(honlm::parse_sequence_pattern(o.pattern));
    honlm::DeblurParams dp;
    dp.blur = parse_blur_spec(o.blur);
    dp.lambda = o.lambda;
    dp.epsilon = o.epsilon;
    dp.step = o.step;
    dp.iters = o.iters;
    const honlm::Image out = honlm::super_resolve(seq, o.sr, dp, o.ref, o.sr_iters, o.threads);
    honlm::write_pgm(out, o.output);
    return 0;
}

struct SynthOpts {
    std::string truth, pattern;
    int scale = 2;
    std::string blur = "uniform:3";
    double sigma = 2.0;
    std::uint64_t seed = 1;
};

int run_synth(const SynthOpts& o) {
    const honlm::Image truth = honlm::read_pgm(o.truth);
    const honlm::SequencePattern sp = honlm::parse_sequence_pattern(o.pattern);
    const auto shifts = honlm::default_shifts(sp.count);
    const honlm::FrameSequence seq = honlm::synth_degrade(truth, o.scale, parse_blur_spec(o.blur),
                                                          o.sigma, sp.count, shifts, o.seed);
    for (int t = 0; t < sp.count; ++t)
        honlm::write_pgm(seq.frames[static_cast<std::size_t>(t)],
                         honlm::format_frame_path(sp, sp.start + t));
    return 0;
}

struct PsnrOpts {
    std::string a, b;
    double peak = 255.0;
    bool quantize = false;
};

int run_psnr(const PsnrOpts& o) {
    honlm::Image a = honlm::read_pgm(o.a);
    honlm::Image b = honlm::read_pgm(o.b);
    if (o.quantize) {
        a = honlm::quantize(a);
        b = honlm::quantize(b);
    }
    std::printf("%.6f\n", honlm::psnr(a, b, o.peak));
    return 0;
}

struct BenchOpts {
    honlm::BenchConfig cfg = honlm::default_bench_config();
    std::string blur = "uniform:3";
    double sigma = 2.0;
};

int run_bench(const BenchOpts& o) {
    honlm::BenchConfig cfg = o.cfg;
    cfg.noise_sigma = o.sigma;
    cfg.deblur.blur = parse_blur_spec(o.blur);
    const honlm::BenchResult res = honlm::run_bench(cfg);
    std::string refs = "ref_frames:";
    for (int r : res.ref_indices) refs += " " + std::to_string(r);
    std::cout << refs << "\n\n" << honlm::format_table(res.reports) << "\n"
              << honlm::format_csv(res.reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-order nonlocal-means restoration: patch-similarity denoising and "
                 "motion-free multi-frame upscaling"};
    app.require_subcommand(1);

    DenoiseOpts den;
    CLI::App* d = app.add_subcommand("denoise", "Denoise a PGM image");
    d->add_option("input", den.input, "Input PGM")->required();
    d->add_option("output", den.output, "Output PGM")->required();
    d->add_option("--order", den.order, "Polynomial order of the local fit")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    d->add_flag("--classic-nlm", den.classic,
                "Plain weighted-mean filter (identical output to --order 0)");
    d->add_option("--patch", den.nlm.patch_size, "Similarity patch size (odd)")
        ->capture_default_str();
    d->add_option("--radius", den.nlm.search_radius, "Search window radius")
        ->capture_default_str();
    d->add_option("--sigma-r", den.nlm.sigma_r, "Radiometric bandwidth")->capture_default_str();
    d->add_option("--sigma-s", den.nlm.sigma_s, "Geometric falloff")->capture_default_str();
    d->add_option("--ridge", den.ridge, "Relative ridge for orders >= 1")->capture_default_str();
    d->add_option("--threads", den.threads, "Worker threads (0 = all)")->capture_default_str();

    UpscaleOpts up;
    CLI::App* u = app.add_subcommand("upscale", "Multi-frame upscale of a PGM sequence");
    u->add_option("--frames", up.pattern, "Input pattern 'name_%0Nd.pgm:start:count'")
        ->required();
    u->add_option("--out", up.output, "Output PGM")->required();
    u->add_option("--scale", up.sr.scale, "Upscale factor")->capture_default_str();
    u->add_option("--patch", up.sr.patch_size, "Similarity patch size (odd, low-res steps)")
        ->capture_default_str();
    u->add_option("--radius", up.sr.search_radius, "Radial cutoff (low-res units)")
        ->capture_default_str();
    u->add_option("--sigma-r", up.sr.sigma_r, "Radiometric bandwidth")->capture_default_str();
    u->add_option("--sigma-s", up.sr.sigma_s, "Geometric falloff (low-res units)")
        ->capture_default_str();
    u->add_option("--order", up.sr.order, "Polynomial order of the fusion fit")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    u->add_option("--fusion-radius", up.sr.fusion_radius,
                  "Sample-gather half-window, high-res units (-1 = auto)")
        ->capture_default_str();
    u->add_option("--ridge", up.sr.ridge, "Relative ridge for orders >= 1")
        ->capture_default_str();
    u->add_option("--blur", up.blur, "Deconvolution PSF")
        ->check(blur_spec_validator())
        ->capture_default_str();
    u->add_option("--lambda", up.lambda, "TV regularization weight")->capture_default_str();
    u->add_option("--epsilon", up.epsilon, "TV smoothing epsilon")->capture_default_str();
    u->add_option("--step", up.step, "Gradient descent step")->capture_default_str();
    u->add_option("--iters", up.iters, "Gradient descent iterations")->capture_default_str();
    u->add_option("--sr-iters", up.sr_iters, "Fuse+deblur rounds")->capture_default_str();
    u->add_option("--ref", up.ref, "Reference frame index")->capture_default_str();
    u->add_option("--threads", up.threads, "Worker threads (0 = all)")->capture_default_str();

    SynthOpts sy;
    CLI::App* s = app.add_subcommand("synth", "Degrade a truth image into a test sequence");
    s->add_option("truth", sy.truth, "Ground-truth PGM")->required();
    s->add_option("frames", sy.pattern, "Output pattern 'name_%0Nd.pgm:start:count'")
        ->required();
    s->add_option("--scale", sy.scale, "Decimation factor")->capture_default_str();
    s->add_option("--blur", sy.blur, "Degradation PSF")
        ->check(blur_spec_validator())
        ->capture_default_str();
    s->add_option("--sigma", sy.sigma, "Gaussian noise sigma (0 = none)")->capture_default_str();
    s->add_option("--seed", sy.seed, "Noise seed")->capture_default_str();

    PsnrOpts ps;
    CLI::App* p = app.add_subcommand("psnr", "PSNR between two PGM images");
    p->add_option("a", ps.a, "First PGM")->required();
    p->add_option("b", ps.b, "Second PGM")->required();
    p->add_option("--peak", ps.peak, "Peak signal value")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    p->add_flag("--quantize", ps.quantize, "Round+clamp both images to 8-bit before scoring");

    BenchOpts be;
    CLI::App* b = app.add_subcommand("bench", "Synthetic end-to-end reconstruction benchmark");
    b->add_option("--width", be.cfg.width, "Truth width")->capture_default_str();
    b->add_option("--height", be.cfg.height, "Truth height")->capture_default_str();
    b->add_option("--frames", be.cfg.frames, "Degraded frame count")->capture_default_str();
    b->add_option("--refs", be.cfg.refs, "Reference frames to evaluate")->capture_default_str();
    b->add_option("--scale", be.cfg.sr.scale, "Decimation/upscale factor")
        ->capture_default_str();
    b->add_option("--sigma", be.sigma, "Degradation noise sigma")->capture_default_str();
    b->add_option("--seed", be.cfg.seed, "Degradation noise seed")->capture_default_str();
    b->add_option("--blur", be.blur, "Degradation and deconvolution PSF")
        ->check(blur_spec_validator())
        ->capture_default_str();
    b->add_option("--patch", be.cfg.sr.patch_size, "Similarity patch size")
        ->capture_default_str();
    b->add_option("--radius", be.cfg.sr.search_radius, "Radial cutoff (low-res units)")
        ->capture_default_str();
    b->add_option("--sigma-r", be.cfg.sr.sigma_r, "Radiometric bandwidth")
        ->capture_default_str();
    b->add_option("--sigma-s", be.cfg.sr.sigma_s, "Geometric falloff")->capture_default_str();
    b->add_option("--ridge", be.cfg.sr.ridge, "Relative ridge for orders >= 1")
        ->capture_default_str();
    b->add_option("--lambda", be.cfg.deblur.lambda, "TV regularization weight")
        ->capture_default_str();
    b->add_option("--epsilon", be.cfg.deblur.epsilon, "TV smoothing epsilon")
        ->capture_default_str();
    b->add_option("--step", be.cfg.deblur.step, "Gradient descent step")->capture_default_str();
    b->add_option("--iters", be.cfg.deblur.iters, "Gradient descent iterations")
        ->capture_default_str();
    b->add_option("--sr-iters", be.cfg.sr_iters, "Fuse+deblur rounds")->capture_default_str();
    b->add_option("--threads", be.cfg.threads, "Worker threads (0 = all)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(d)) return run_denoise(den);
        if (app.got_subcommand(u)) return run_upscale(up);
        if (app.got_subcommand(s)) return run_synth(sy);
        if (app.got_subcommand(p)) return run_psnr(ps);
        if (app.got_subcommand(b)) return run_bench(be);
    } catch (const std::exception& e) {
        std::cerr << "honlm: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
