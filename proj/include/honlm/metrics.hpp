#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "honlm/image.hpp"

namespace honlm {

inline double mse(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw std::invalid_argument("mse: image dimensions differ");
    if (a.empty()) throw std::invalid_argument("mse: empty image");
    double acc = 0.0;
    for (int r = 0; r < a.height(); ++r) {
        for (int c = 0; c < a.width(); ++c) {
            const double d = a.at(r, c) - b.at(r, c);
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(a.width()) * a.height());
}

/// Peak signal-to-noise ratio in dB; identical images give +infinity.
inline double psnr(const Image& a, const Image& b, double peak = 255.0) {
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be > 0");
    const double m = mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / m);
}

/// One method's scores: (frame index, PSNR dB) pairs and their mean.
struct PsnrReport {
    std::string method_label;
    std::vector<std::pair<int, double>> per_frame;
    double mean_db = 0.0;
};

inline PsnrReport make_psnr_report(std::string label,
                                   std::vector<std::pair<int, double>> per_frame) {
    if (per_frame.empty()) throw std::invalid_argument("make_psnr_report: no frames");
    double acc = 0.0;
    for (const auto& [index, db] : per_frame) {
        if (!std::isfinite(db))
            throw std::domain_error("make_psnr_report: cannot average a non-finite PSNR (frame " +
                                    std::to_string(index) + ")");
        acc += db;
    }
    PsnrReport rep;
    rep.method_label = std::move(label);
    rep.mean_db = acc / static_cast<double>(per_frame.size());
    rep.per_frame = std::move(per_frame);
    return rep;
}

/// Per-frame PSNR of a reconstruction against the truth, plus the mean.
/// Any infinite per-frame PSNR is a contract violation (nothing to average).
inline PsnrReport mean_psnr(const FrameSequence& recon, const FrameSequence& truth,
                            const std::string& label) {
    if (recon.frames.size() != truth.frames.size())
        throw std::invalid_argument("mean_psnr: frame counts differ");
    if (recon.frames.empty()) throw std::invalid_argument("mean_psnr: empty sequences");
    std::vector<std::pair<int, double>> per_frame;
    per_frame.reserve(recon.frames.size());
    for (std::size_t t = 0; t < recon.frames.size(); ++t)
        per_frame.emplace_back(static_cast<int>(t), psnr(recon.frames[t], truth.frames[t]));
    return make_psnr_report(label, std::move(per_frame));
}

namespace detail {

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace detail

/// Plain-text table, one method per row: label, per-frame PSNR columns and
/// the mean, all %.4f, space-aligned. All reports must cover the same frames.
inline std::string format_table(const std::vector<PsnrReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("format_table: no reports");
    const std::size_t frames = reports[0].per_frame.size();
    for (const PsnrReport& rep : reports)
        for (std::size_t t = 0; t < frames; ++t)
            if (rep.per_frame.size() != frames ||
                rep.per_frame[t].first != reports[0].per_frame[t].first)
                throw std::invalid_argument("format_table: reports cover different frames");

    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"method"};
    for (std::size_t t = 0; t < frames; ++t)
        header.push_back("frame" + std::to_string(reports[0].per_frame[t].first));
    header.emplace_back("mean");
    cells.push_back(std::move(header));
    for (const PsnrReport& rep : reports) {
        std::vector<std::string> row{rep.method_label};
        for (const auto& [index, db] : rep.per_frame) row.push_back(detail::fixed(db, 4));
        row.push_back(detail::fixed(rep.mean_db, 4));
        cells.push_back(std::move(row));
    }

    std::vector<std::size_t> widths(cells[0].size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());

    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) out << "  ";
            out << row[i];
            if (i + 1 < row.size()) out << std::string(widths[i] - row[i].size(), ' ');
        }
        out << '\n';
    }
    return out.str();
}

/// CSV with header method,frame,psnr_db; one row per (method, frame), %.6f.
inline std::string format_csv(const std::vector<PsnrReport>& reports) {
    std::ostringstream out;
    out << "method,frame,psnr_db\n";
    for (const PsnrReport& rep : reports)
        for (const auto& [index, db] : rep.per_frame)
            out << rep.method_label << ',' << index << ',' << detail::fixed(db, 6) << '\n';
    return out.str();
}

}  // namespace honlm
