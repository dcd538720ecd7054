#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace honlm {

/// Maps an arbitrary index onto [0, n) by mirroring about the boundary
/// pixels without duplicating them: -1 -> 1, n -> n-2.
inline int mirror_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

/// Single-channel raster of real-valued intensities, row-major.
///
/// Intensities are nominally in [0, 255] but are never clamped by image
/// operations; quantization happens only on PGM write. All operations on
/// images are pure functions, so sharing an Image across threads is safe.
class Image {
public:
    Image() = default;

    Image(int width, int height, double fill = 0.0)
        : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    Image(int width, int height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("Image: data length must equal width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    std::size_t pixel_count() const { return data_.size(); }

    double& at(int row, int col) { return data_[idx(row, col)]; }
    double at(int row, int col) const { return data_[idx(row, col)]; }

    /// Read with symmetric (mirror) padding for out-of-range coordinates.
    double at_mirrored(int row, int col) const {
        return data_[static_cast<std::size_t>(mirror_index(row, height_)) * width_ +
                     static_cast<std::size_t>(mirror_index(col, width_))];
    }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Image&) const = default;

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("Image: width and height must be >= 1");
    }
    std::size_t idx(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

inline bool all_finite(const Image& img) {
    for (double v : img.data())
        if (!std::isfinite(v)) return false;
    return true;
}

/// q x q window of intensities extracted around a source pixel.
struct Patch {
    int size = 0;  // q, odd
    int center_row = 0;
    int center_col = 0;
    std::vector<double> values;  // size*size, row-major

    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * size + c];
    }
};

/// Square odd-sized filter kernel.
struct Kernel2D {
    int size = 0;
    std::vector<double> taps;  // size*size, row-major

    double at(int r, int c) const {
        return taps[static_cast<std::size_t>(r) * size + c];
    }
    double tap_sum() const {
        double s = 0.0;
        for (double t : taps) s += t;
        return s;
    }
};

inline void validate_kernel(const Kernel2D& k) {
    if (k.size < 1 || k.size % 2 == 0)
        throw std::invalid_argument("Kernel2D: size must be odd and >= 1");
    if (k.taps.size() != static_cast<std::size_t>(k.size) * k.size)
        throw std::invalid_argument("Kernel2D: tap count must equal size*size");
}

inline Kernel2D identity_kernel() { return Kernel2D{1, {1.0}}; }

inline Kernel2D uniform_kernel(int size) {
    Kernel2D k{size, {}};
    if (size < 1 || size % 2 == 0)
        throw std::invalid_argument("uniform_kernel: size must be odd and >= 1");
    k.taps.assign(static_cast<std::size_t>(size) * size, 1.0 / (size * size));
    return k;
}

/// Normalized Gaussian taps; size 0 picks the smallest odd size covering 3 sigma.
inline Kernel2D gaussian_kernel(double sigma, int size = 0) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    if (size == 0) size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
    if (size < 1 || size % 2 == 0)
        throw std::invalid_argument("gaussian_kernel: size must be odd and >= 1");
    Kernel2D k{size, std::vector<double>(static_cast<std::size_t>(size) * size)};
    const int h = size / 2;
    double sum = 0.0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double dr = r - h, dc = c - h;
            const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
            k.taps[static_cast<std::size_t>(r) * size + c] = v;
            sum += v;
        }
    for (double& t : k.taps) t /= sum;
    return k;
}

/// Extracts the q x q window centered at (row, col); coordinates outside the
/// image resolve by mirror padding. The center itself must be in bounds.
inline Patch extract_patch(const Image& img, int row, int col, int q) {
    if (q < 1 || q % 2 == 0)
        throw std::invalid_argument("extract_patch: patch size must be odd and >= 1");
    if (!img.in_bounds(row, col))
        throw std::out_of_range("extract_patch: center outside image bounds");
    Patch p{q, row, col, {}};
    p.values.reserve(static_cast<std::size_t>(q) * q);
    const int h = q / 2;
    for (int dr = -h; dr <= h; ++dr)
        for (int dc = -h; dc <= h; ++dc)
            p.values.push_back(img.at_mirrored(row + dr, col + dc));
    return p;
}

/// Squared L2 distance between two equally sized patches.
inline double patch_ssd(const Patch& a, const Patch& b) {
    if (a.size != b.size)
        throw std::invalid_argument("patch_ssd: patch sizes differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc;
}

/// patch_ssd of the two q x q windows centered at (r1,c1) and (r2,c2),
/// computed in place without materializing the patches.
inline double patch_ssd_at(const Image& img, int r1, int c1, int r2, int c2, int q) {
    const int h = q / 2;
    double acc = 0.0;
    for (int dr = -h; dr <= h; ++dr)
        for (int dc = -h; dc <= h; ++dc) {
            const double d = img.at_mirrored(r1 + dr, c1 + dc) -
                             img.at_mirrored(r2 + dr, c2 + dc);
            acc += d * d;
        }
    return acc;
}

/// 2-D convolution with mirror padding; output has the input's size.
inline Image convolve(const Image& img, const Kernel2D& k) {
    validate_kernel(k);
    if (img.empty()) throw std::invalid_argument("convolve: empty image");
    const int h = k.size / 2;
    Image out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) {
            double acc = 0.0;
            for (int u = -h; u <= h; ++u)
                for (int v = -h; v <= h; ++v)
                    acc += k.at(h + u, h + v) * img.at_mirrored(r - u, c - v);
            out.at(r, c) = acc;
        }
    return out;
}

/// Exact adjoint of convolve() under the same mirror padding: contributions
/// are scattered back onto the source pixels each padded read came from.
/// Away from the boundary this is plain correlation with the kernel.
inline Image convolve_adjoint(const Image& img, const Kernel2D& k) {
    validate_kernel(k);
    if (img.empty()) throw std::invalid_argument("convolve_adjoint: empty image");
    const int h = k.size / 2;
    Image out(img.width(), img.height(), 0.0);
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) {
            const double z = img.at(r, c);
            for (int u = -h; u <= h; ++u)
                for (int v = -h; v <= h; ++v)
                    out.at(mirror_index(r - u, img.height()),
                           mirror_index(c - v, img.width())) += k.at(h + u, h + v) * z;
        }
    return out;
}

/// Keeps samples at rows/cols divisible by p (top-left lattice).
inline Image decimate(const Image& img, int p) {
    if (p < 1) throw std::invalid_argument("decimate: factor must be >= 1");
    if (p == 1) return img;
    const int ow = (img.width() + p - 1) / p;
    const int oh = (img.height() + p - 1) / p;
    Image out(ow, oh);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c)
            out.at(r, c) = img.at(r * p, c * p);
    return out;
}

/// Adjoint lattice placement: input samples land on the top-left lattice of
/// a p*width x p*height zero image, so decimate(upsample_zero_fill(x,p),p) == x.
inline Image upsample_zero_fill(const Image& img, int p) {
    if (p < 1) throw std::invalid_argument("upsample_zero_fill: factor must be >= 1");
    if (p == 1) return img;
    Image out(img.width() * p, img.height() * p, 0.0);
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c)
            out.at(r * p, c * p) = img.at(r, c);
    return out;
}

/// Shifts content down/right by (dy, dx); exposed pixels are mirror-padded.
inline Image translate(const Image& img, int dy, int dx) {
    if (std::abs(dy) >= img.height() || std::abs(dx) >= img.width())
        throw std::invalid_argument("translate: shift exceeds image size");
    if (dy == 0 && dx == 0) return img;
    Image out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c)
            out.at(r, c) = img.at_mirrored(r - dy, c - dx);
    return out;
}

namespace detail {

/// Keys cubic convolution kernel, a = -1/2. Interpolating: exact at the
/// sample points and on polynomials up to degree 2.
inline double cubic_weight(double s) {
    s = std::abs(s);
    if (s < 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
    if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
    return 0.0;
}

inline std::vector<double> cubic_upscale_line(const std::vector<double>& line, int p) {
    const int n = static_cast<int>(line.size());
    std::vector<double> out(static_cast<std::size_t>(n) * p);
    for (int k = 0; k < n * p; ++k) {
        const int base = k / p;
        const double t = static_cast<double>(k - base * p) / p;
        double acc = 0.0;
        for (int m = -1; m <= 2; ++m)
            acc += cubic_weight(t - m) * line[mirror_index(base + m, n)];
        out[k] = acc;
    }
    return out;
}

}  // namespace detail

/// Separable cubic upscale by an integer factor, aligned so that HR pixel
/// p*i reproduces LR pixel i exactly (decimate(upscale_cubic(x,p),p) == x).
inline Image upscale_cubic(const Image& img, int p) {
    if (p < 1) throw std::invalid_argument("upscale_cubic: factor must be >= 1");
    if (p == 1) return img;
    // Horizontal pass.
    Image wide(img.width() * p, img.height());
    std::vector<double> line(img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) line[c] = img.at(r, c);
        const std::vector<double> up = detail::cubic_upscale_line(line, p);
        for (int c = 0; c < wide.width(); ++c) wide.at(r, c) = up[c];
    }
    // Vertical pass.
    Image out(wide.width(), img.height() * p);
    std::vector<double> col(img.height());
    for (int c = 0; c < wide.width(); ++c) {
        for (int r = 0; r < img.height(); ++r) col[r] = wide.at(r, c);
        const std::vector<double> up = detail::cubic_upscale_line(col, p);
        for (int r = 0; r < out.height(); ++r) out.at(r, c) = up[r];
    }
    return out;
}

/// Rounds half-up and clamps to the 8-bit range.
inline double quantize_level(double v) {
    return std::clamp(std::floor(v + 0.5), 0.0, 255.0);
}

inline Image quantize(const Image& img) {
    Image out = img;
    for (double& v : out.data()) v = quantize_level(v);
    return out;
}

/// Ordered list of equally sized frames.
struct FrameSequence {
    std::vector<Image> frames;

    int count() const { return static_cast<int>(frames.size()); }

    void validate() const {
        if (frames.empty())
            throw std::invalid_argument("FrameSequence: at least one frame required");
        for (std::size_t t = 1; t < frames.size(); ++t)
            if (frames[t].width() != frames[0].width() ||
                frames[t].height() != frames[0].height())
                throw std::invalid_argument(
                    "FrameSequence: frame " + std::to_string(t) + " dimensions differ");
    }
};

}  // namespace honlm
