#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "honlm/image.hpp"

namespace honlm {

namespace detail {

inline bool is_pnm_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

[[noreturn]] inline void pnm_fail(const std::string& path, const std::string& what,
                                  std::size_t offset) {
    throw std::runtime_error(path + ": " + what + " at byte " + std::to_string(offset));
}

/// Skips whitespace and '#' comments (which run to end of line).
inline void skip_pnm_space(const std::string& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        if (is_pnm_space(buf[pos])) {
            ++pos;
        } else if (buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
}

inline int parse_pnm_int(const std::string& buf, std::size_t& pos, const std::string& path,
                         const char* what) {
    skip_pnm_space(buf, pos);
    if (pos >= buf.size() || buf[pos] < '0' || buf[pos] > '9')
        pnm_fail(path, std::string("expected ") + what, pos);
    long value = 0;
    while (pos < buf.size() && buf[pos] >= '0' && buf[pos] <= '9') {
        value = value * 10 + (buf[pos] - '0');
        if (value > 1000000000L) pnm_fail(path, std::string(what) + " out of range", pos);
        ++pos;
    }
    return static_cast<int>(value);
}

}  // namespace detail

/// Reads a binary (P5) or ASCII (P2) PGM with maxval up to 255 into a
/// double raster holding the raw sample values. Parse and I/O failures
/// throw std::runtime_error naming the file and byte offset.
inline Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::runtime_error(path + ": read failed");
    const std::string buf = ss.str();

    if (buf.size() < 2 || buf[0] != 'P') detail::pnm_fail(path, "not a PGM file", 0);
    const char type = buf[1];
    if (type != '2' && type != '5')
        detail::pnm_fail(path, std::string("unsupported PGM type 'P") + type + "'", 1);
    std::size_t pos = 2;

    const int width = detail::parse_pnm_int(buf, pos, path, "width");
    const int height = detail::parse_pnm_int(buf, pos, path, "height");
    if (width < 1 || height < 1) detail::pnm_fail(path, "image dimensions must be positive", pos);
    const int maxval = detail::parse_pnm_int(buf, pos, path, "maxval");
    if (maxval < 1) detail::pnm_fail(path, "maxval must be positive", pos);
    if (maxval > 255) detail::pnm_fail(path, "maxval above 255 is unsupported", pos);

    Image img(width, height);
    const std::size_t total = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (type == '5') {
        if (pos >= buf.size() || !detail::is_pnm_space(buf[pos]))
            detail::pnm_fail(path, "expected single whitespace before raster", pos);
        ++pos;
        if (buf.size() - pos < total)
            detail::pnm_fail(path, "truncated raster", buf.size());
        for (std::size_t k = 0; k < total; ++k) {
            const unsigned char v = static_cast<unsigned char>(buf[pos + k]);
            if (static_cast<int>(v) > maxval)
                detail::pnm_fail(path, "sample above maxval", pos + k);
            img.data()[k] = static_cast<double>(v);
        }
    } else {
        for (std::size_t k = 0; k < total; ++k) {
            const std::size_t at = pos;
            const int v = detail::parse_pnm_int(buf, pos, path, "sample");
            if (v > maxval) detail::pnm_fail(path, "sample above maxval", at);
            img.data()[k] = static_cast<double>(v);
        }
    }
    return img;
}

/// Writes a binary PGM: header "P5\n<w> <h>\n255\n" followed by the
/// quantized (round half-up, clamp to [0,255]) samples in row-major order.
inline void write_pgm(const Image& img, const std::string& path) {
    if (img.width() == 0 || img.height() == 0)
        throw std::invalid_argument("write_pgm: empty image");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    char header[64];
    std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", img.width(), img.height());
    out << header;
    std::vector<unsigned char> bytes(static_cast<std::size_t>(img.width()) *
                                     static_cast<std::size_t>(img.height()));
    for (std::size_t k = 0; k < bytes.size(); ++k)
        bytes[k] = static_cast<unsigned char>(quantize_level(img.data()[k]));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error(path + ": write failed");
}

/// Numbered-frame source: template with a single %0Nd marker, expanded for
/// frames start, start+1, ..., start+count-1.
struct SequencePattern {
    std::string directory;  // optional; prepended with '/' when nonempty
    std::string filename_template;
    int start = 0;
    int count = 0;
};

namespace detail {

/// Expands the single %0Nd marker (N in 1..9) to the zero-padded value.
inline std::string expand_frame_marker(const std::string& tmpl, int value,
                                       const char* context) {
    std::string out;
    bool seen = false;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] != '%') {
            out += tmpl[i];
            continue;
        }
        if (seen)
            throw std::invalid_argument(std::string(context) + ": more than one %0Nd marker");
        if (i + 3 >= tmpl.size() || tmpl[i + 1] != '0' || tmpl[i + 2] < '1' ||
            tmpl[i + 2] > '9' || tmpl[i + 3] != 'd')
            throw std::invalid_argument(std::string(context) + ": malformed %0Nd marker");
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%0*d", tmpl[i + 2] - '0', value);
        out += buf;
        i += 3;
        seen = true;
    }
    if (!seen) throw std::invalid_argument(std::string(context) + ": missing %0Nd marker");
    return out;
}

}  // namespace detail

inline std::string format_frame_path(const SequencePattern& sp, int frame_number) {
    std::string name =
        detail::expand_frame_marker(sp.filename_template, frame_number, "format_frame_path");
    if (sp.directory.empty()) return name;
    if (sp.directory.back() == '/') return sp.directory + name;
    return sp.directory + "/" + name;
}

/// Parses a packed pattern "path_with_%0Nd.pgm:start:count".
inline SequencePattern parse_sequence_pattern(const std::string& packed) {
    const std::size_t second = packed.rfind(':');
    if (second == std::string::npos)
        throw std::invalid_argument("parse_sequence_pattern: expected template:start:count");
    const std::size_t first = packed.rfind(':', second == 0 ? 0 : second - 1);
    if (first == std::string::npos || first == 0)
        throw std::invalid_argument("parse_sequence_pattern: expected template:start:count");

    SequencePattern sp;
    std::string tmpl = packed.substr(0, first);
    const std::string start_str = packed.substr(first + 1, second - first - 1);
    const std::string count_str = packed.substr(second + 1);
    try {
        std::size_t used = 0;
        sp.start = std::stoi(start_str, &used);
        if (used != start_str.size()) throw std::invalid_argument("trailing");
        sp.count = std::stoi(count_str, &used);
        if (used != count_str.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_sequence_pattern: start and count must be integers");
    }
    if (sp.start < 0) throw std::invalid_argument("parse_sequence_pattern: start must be >= 0");
    if (sp.count < 1) throw std::invalid_argument("parse_sequence_pattern: count must be >= 1");

    const std::size_t slash = tmpl.rfind('/');
    if (slash != std::string::npos) {
        sp.directory = tmpl.substr(0, slash);
        sp.filename_template = tmpl.substr(slash + 1);
    } else {
        sp.filename_template = std::move(tmpl);
    }
    detail::expand_frame_marker(sp.filename_template, sp.start, "parse_sequence_pattern");
    return sp;
}

inline FrameSequence load_sequence(const SequencePattern& sp) {
    if (sp.count < 1) throw std::invalid_argument("load_sequence: count must be >= 1");
    FrameSequence seq;
    seq.frames.reserve(static_cast<std::size_t>(sp.count));
    for (int k = 0; k < sp.count; ++k) {
        try {
            seq.frames.push_back(read_pgm(format_frame_path(sp, sp.start + k)));
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("load_sequence: frame " + std::to_string(sp.start + k) +
                                     ": " + e.what());
        }
        const Image& f = seq.frames.back();
        if (f.width() != seq.frames[0].width() || f.height() != seq.frames[0].height())
            throw std::invalid_argument("load_sequence: frame " + std::to_string(sp.start + k) +
                                        " dimensions differ from frame " +
                                        std::to_string(sp.start));
    }
    return seq;
}

}  // namespace honlm
