#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace honlm {

inline constexpr int kMaxBasisWidth = 6;

/// Number of basis columns for a local polynomial of the given order.
inline int basis_width(int order) {
    switch (order) {
        case 0: return 1;
        case 1: return 3;
        case 2: return 6;
        default: throw std::invalid_argument("basis_width: order must be 0, 1 or 2");
    }
}

inline int order_for_width(int width) {
    switch (width) {
        case 1: return 0;
        case 3: return 1;
        case 6: return 2;
        default: throw std::invalid_argument("order_for_width: width must be 1, 3 or 6");
    }
}

/// Half-vectorization of a symmetric 2x2 matrix (row-major [m11,m12,m21,m22]):
/// stacks the lower triangle column-wise into [m11, m21, m22].
inline std::array<double, 3> vech(const std::array<double, 4>& m) {
    if (!(std::abs(m[1] - m[2]) <= 1e-12))
        throw std::invalid_argument("vech: matrix is not symmetric");
    return {m[0], m[2], m[3]};
}

/// Writes the local polynomial basis at offset (d0, d1) into out and returns
/// its width: [1], [1,d0,d1] or [1,d0,d1,d0^2,d0*d1,d1^2] for orders 0/1/2.
/// The quadratic block is vech of the offset outer product, unscaled.
inline int basis_row(double d0, double d1, int order, double* out) {
    out[0] = 1.0;
    if (order >= 1) {
        out[1] = d0;
        out[2] = d1;
    }
    if (order >= 2) {
        out[3] = d0 * d0;
        out[4] = d0 * d1;
        out[5] = d1 * d1;
    }
    return basis_width(order);  // validates order
}

inline std::vector<double> basis_row(const std::array<double, 2>& offset, int order) {
    std::array<double, kMaxBasisWidth> buf{};
    const int w = basis_row(offset[0], offset[1], order, buf.data());
    return std::vector<double>(buf.begin(), buf.begin() + w);
}

/// Scaled bivariate Gaussian kernel K_H(t) = K(H^-1 t) / det(H) with
/// K(u) = exp(-|u|^2 / 2) / (2 pi); H is the 2x2 smoothing matrix
/// (row-major, symmetric positive definite).
inline double kernel_weight(const std::array<double, 2>& t,
                            const std::array<double, 4>& smoothing) {
    const auto& m = smoothing;
    if (!(std::abs(m[1] - m[2]) <= 1e-12))
        throw std::invalid_argument("kernel_weight: smoothing matrix is not symmetric");
    const double det = m[0] * m[3] - m[1] * m[2];
    if (!(det > 0.0) || !(m[0] > 0.0))
        throw std::invalid_argument("kernel_weight: smoothing matrix is not positive definite");
    const double u0 = (m[3] * t[0] - m[1] * t[1]) / det;
    const double u1 = (-m[2] * t[0] + m[0] * t[1]) / det;
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return std::exp(-0.5 * (u0 * u0 + u1 * u1)) / (kTwoPi * det);
}

/// Scattered sample: a 2-D position and the measured value there.
struct SamplePoint {
    std::array<double, 2> position{};
    double value = 0.0;
};

struct RegressionConfig {
    int order = 2;
    std::array<double, 4> smoothing{1.0, 0.0, 0.0, 1.0};
    double ridge = 0.0;  // absolute Tikhonov weight tau on the slope/curvature
                         // coefficients; the intercept is never penalized
};

/// Coefficients b = [beta0, beta1^T, beta2^T] of a local polynomial fit.
/// fell_back marks solves where the normal matrix was numerically singular
/// and the fit degraded to the order-0 weighted mean.
struct RegressionFit {
    int order = 0;
    std::array<double, kMaxBasisWidth> beta{};
    bool fell_back = false;

    int width() const { return basis_width(order); }
    double value() const { return beta[0]; }
};

/// Accumulates the weighted normal equations X^T W X b = X^T W y one sample
/// at a time (fixed capacity 6, no allocation) and solves them by LDLT.
///
/// A solve first factors the unridged normal matrix; if a pivot is
/// nonpositive or the pivot ratio exceeds 1e12 the system is treated as
/// rank-deficient and the fit falls back to the order-0 weighted mean.
/// Otherwise the (optionally ridged) system is solved at the full order.
class WlsAccumulator {
public:
    explicit WlsAccumulator(int width) : width_(width) {
        order_for_width(width);  // validates
    }

    void add(const double* row, double weight, double value) {
        for (int i = 0; i < width_; ++i) {
            const double wr = weight * row[i];
            rhs_[i] += wr * value;
            double* n = &normal_[static_cast<std::size_t>(i) * kMaxBasisWidth];
            for (int j = 0; j <= i; ++j) n[j] += wr * row[j];
        }
        wsum_ += weight;
        wvalue_ += weight * value;
        ++count_;
    }

    int width() const { return width_; }
    std::size_t sample_count() const { return count_; }
    double weight_sum() const { return wsum_; }

    /// Trace of the accumulated normal matrix (used for relative ridge scaling).
    double normal_trace() const {
        double t = 0.0;
        for (int i = 0; i < width_; ++i)
            t += normal_[static_cast<std::size_t>(i) * kMaxBasisWidth + i];
        return t;
    }

    RegressionFit solve(double ridge) const {
        if (count_ == 0)
            throw std::invalid_argument("wls_solve: no samples");
        if (!(ridge >= 0.0))
            throw std::invalid_argument("wls_solve: ridge must be >= 0");
        if (!(wsum_ > 0.0))
            throw std::domain_error("wls_solve: all weights are zero");

        RegressionFit fit;
        fit.order = order_for_width(width_);
        if (width_ == 1) {
            fit.beta[0] = rhs_[0] / normal_[0];  // intercept-only: ridge has no target
            return fit;
        }
        std::array<double, kMaxBasisWidth * kMaxBasisWidth> f{};
        if (!ldlt_factor(0.0, f)) {
            fit.order = 0;
            fit.beta = {};
            fit.beta[0] = wvalue_ / wsum_;
            fit.fell_back = true;
            return fit;
        }
        if (ridge > 0.0) ldlt_factor(ridge, f);  // well-posed once the gate passed
        ldlt_solve(f, fit.beta);
        return fit;
    }

private:
    // Lower-triangle LDLT of the normal matrix with ridge added to every
    // diagonal entry except the intercept's; L below the diagonal, D on it.
    // Returns false when a pivot is nonpositive or the pivot ratio tops 1e12.
    bool ldlt_factor(double ridge, std::array<double, kMaxBasisWidth * kMaxBasisWidth>& f) const {
        const int n = width_;
        double dmax = 0.0, dmin = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = normal_[static_cast<std::size_t>(i) * kMaxBasisWidth + j];
                if (i == j && i > 0) sum += ridge;
                for (int m = 0; m < j; ++m)
                    sum -= f[static_cast<std::size_t>(i) * kMaxBasisWidth + m] *
                           f[static_cast<std::size_t>(j) * kMaxBasisWidth + m] *
                           f[static_cast<std::size_t>(m) * kMaxBasisWidth + m];
                if (i == j) {
                    if (!(sum > 0.0)) return false;
                    f[static_cast<std::size_t>(i) * kMaxBasisWidth + i] = sum;
                    if (i == 0) {
                        dmax = dmin = sum;
                    } else {
                        dmax = std::max(dmax, sum);
                        dmin = std::min(dmin, sum);
                    }
                } else {
                    f[static_cast<std::size_t>(i) * kMaxBasisWidth + j] =
                        sum / f[static_cast<std::size_t>(j) * kMaxBasisWidth + j];
                }
            }
        }
        return dmax <= 1e12 * dmin;
    }

    void ldlt_solve(const std::array<double, kMaxBasisWidth * kMaxBasisWidth>& f,
                    std::array<double, kMaxBasisWidth>& x) const {
        const int n = width_;
        // Forward substitution L z = rhs.
        for (int i = 0; i < n; ++i) {
            double sum = rhs_[i];
            for (int j = 0; j < i; ++j)
                sum -= f[static_cast<std::size_t>(i) * kMaxBasisWidth + j] * x[j];
            x[i] = sum;
        }
        // Diagonal scaling and back substitution L^T x = z.
        for (int i = 0; i < n; ++i)
            x[i] /= f[static_cast<std::size_t>(i) * kMaxBasisWidth + i];
        for (int i = n - 1; i >= 0; --i) {
            double sum = x[i];
            for (int j = i + 1; j < n; ++j)
                sum -= f[static_cast<std::size_t>(j) * kMaxBasisWidth + i] * x[j];
            x[i] = sum;
        }
    }

    int width_;
    std::size_t count_ = 0;
    std::array<double, kMaxBasisWidth * kMaxBasisWidth> normal_{};
    std::array<double, kMaxBasisWidth> rhs_{};
    double wsum_ = 0.0;
    double wvalue_ = 0.0;
};

/// Solves min_b |y - X b|^2_W + ridge |b|^2 over basis rows X, diagonal
/// weights W and values y; the row width must be 1, 3 or 6.
inline RegressionFit wls_solve(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& weights,
                               const std::vector<double>& values,
                               double ridge = 0.0) {
    if (rows.empty()) throw std::invalid_argument("wls_solve: no samples");
    if (rows.size() != weights.size() || rows.size() != values.size())
        throw std::invalid_argument("wls_solve: rows, weights and values sizes differ");
    const int width = static_cast<int>(rows[0].size());
    WlsAccumulator acc(width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != width)
            throw std::invalid_argument("wls_solve: inconsistent row widths");
        if (!(weights[i] >= 0.0))
            throw std::invalid_argument("wls_solve: weights must be nonnegative");
        acc.add(rows[i].data(), weights[i], values[i]);
    }
    return acc.solve(ridge);
}

/// Local polynomial estimate at x: basis rows on sample offsets, Gaussian
/// kernel weights, WLS solve; returns the fitted beta0.
inline double kernel_regress(const std::vector<SamplePoint>& samples,
                             const std::array<double, 2>& x,
                             const RegressionConfig& cfg) {
    if (samples.empty()) throw std::invalid_argument("kernel_regress: no samples");
    WlsAccumulator acc(basis_width(cfg.order));
    std::array<double, kMaxBasisWidth> row{};
    for (const SamplePoint& s : samples) {
        const std::array<double, 2> d{s.position[0] - x[0], s.position[1] - x[1]};
        basis_row(d[0], d[1], cfg.order, row.data());
        acc.add(row.data(), kernel_weight(d, cfg.smoothing), s.value);
    }
    return acc.solve(cfg.ridge).value();
}

}  // namespace honlm
