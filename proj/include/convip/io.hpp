#pragma once

// File formats accepted by the command-line front end.
//
//   images  - PGM (P2 ascii or P5 binary, maxval <= 255) or CSV. PGM
//             pixels are unsigned; they are rebiased by -128 on read so
//             the engines see signed 8-bit data, and by +128 on write.
//             CSV entries are signed integers taken as-is.
//   kernels - whitespace-separated signed integers; the side length is
//             the integer square root of the count.
//   budgets - JSON object with keys luts, regs, clbs, dsps.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convip/errors.hpp"
#include "convip/image.hpp"
#include "convip/resources.hpp"

namespace convip {
namespace io_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Smallest signed width that holds v, floored at 2 bits.
inline int bits_needed(std::int64_t v) {
    int b = 2;
    while (b < 32 && !(v >= -(std::int64_t{1} << (b - 1)) && v <= (std::int64_t{1} << (b - 1)) - 1))
        ++b;
    return b;
}

inline int derive_width(const std::vector<std::int32_t>& values) {
    int w = 2;
    for (std::int32_t v : values) w = std::max(w, bits_needed(v));
    return w;
}

// PGM token scanner: skips whitespace and # comments.
struct PgmScanner {
    const std::string& text;
    std::size_t pos = 0;

    std::string next_token() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw parse_error("truncated PGM header");
        return text.substr(start, pos - start);
    }

    int next_int(const char* what) {
        std::string tok = next_token();
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw parse_error("");
            return v;
        } catch (const std::exception&) {
            throw parse_error(std::string("bad PGM ") + what + ": '" + tok + "'");
        }
    }
};

}  // namespace io_detail

// PGM pixels land in [-128, 127] after the -128 rebias, so planes read
// this way are always 8-bit.
inline ImagePlane read_pgm(const std::string& path) {
    const std::string text = io_detail::read_file(path);
    io_detail::PgmScanner scan{text};
    const std::string magic = scan.next_token();
    if (magic != "P2" && magic != "P5") throw parse_error(path + ": not a P2/P5 PGM");
    const int width = scan.next_int("width");
    const int height = scan.next_int("height");
    const int maxval = scan.next_int("maxval");
    if (width <= 0 || height <= 0) throw parse_error(path + ": bad PGM dimensions");
    if (maxval <= 0 || maxval > 255) throw parse_error(path + ": PGM maxval must be 1..255");

    std::vector<std::int32_t> pixels;
    pixels.reserve(static_cast<std::size_t>(width) * height);
    if (magic == "P2") {
        for (int i = 0; i < width * height; ++i) pixels.push_back(scan.next_int("pixel") - 128);
    } else {
        std::size_t at = scan.pos + 1;  // single whitespace byte after maxval
        if (at + static_cast<std::size_t>(width) * height > text.size())
            throw parse_error(path + ": truncated P5 payload");
        for (int i = 0; i < width * height; ++i)
            pixels.push_back(static_cast<unsigned char>(text[at + i]) - 128);
    }
    for (std::int32_t p : pixels)
        if (p < -128 || p > 127) throw parse_error(path + ": pixel out of PGM range");
    return ImagePlane(width, height, 8, std::move(pixels));
}

// CSV of signed integers, one image row per line. Width defaults to the
// smallest that fits the data; bits_override pins it instead.
inline ImagePlane read_csv_image(const std::string& path, int bits_override = 0) {
    const std::string text = io_detail::read_file(path);
    std::vector<std::int32_t> values;
    int width = -1, height = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::istringstream cells(line);
        std::string cell;
        int row_width = 0;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                long v = std::stol(cell, &used);
                while (used < cell.size() &&
                       std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw parse_error("");
                values.push_back(static_cast<std::int32_t>(v));
            } catch (const std::exception&) {
                throw parse_error(path + ": bad CSV cell '" + cell + "'");
            }
            ++row_width;
        }
        if (width == -1) width = row_width;
        else if (row_width != width) throw parse_error(path + ": ragged CSV rows");
        ++height;
    }
    if (width <= 0 || height <= 0) throw parse_error(path + ": empty CSV image");
    const int bits = bits_override > 0 ? bits_override : io_detail::derive_width(values);
    return ImagePlane(width, height, bits, std::move(values));
}

// Dispatch on content: PGM magic wins, anything else is treated as CSV.
inline ImagePlane read_image(const std::string& path, int bits_override = 0) {
    const std::string text = io_detail::read_file(path);
    if (text.rfind("P2", 0) == 0 || text.rfind("P5", 0) == 0) return read_pgm(path);
    return read_csv_image(path, bits_override);
}

inline Kernel read_kernel(const std::string& path, int bits_override = 0) {
    const std::string text = io_detail::read_file(path);
    std::vector<std::int32_t> coeffs;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        try {
            std::size_t used = 0;
            long v = std::stol(tok, &used);
            if (used != tok.size()) throw parse_error("");
            coeffs.push_back(static_cast<std::int32_t>(v));
        } catch (const std::exception&) {
            throw parse_error(path + ": bad kernel coefficient '" + tok + "'");
        }
    }
    int side = 1;
    while (side * side < static_cast<int>(coeffs.size())) ++side;
    if (coeffs.empty() || side * side != static_cast<int>(coeffs.size()))
        throw parse_error(path + ": kernel needs a square count of coefficients, got " +
                          std::to_string(coeffs.size()));
    const int bits = bits_override > 0 ? bits_override : io_detail::derive_width(coeffs);
    return Kernel(side, bits, std::move(coeffs));
}

inline Budget read_budget(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(io_detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    Budget budget;
    struct Key { const char* name; std::int64_t* slot; };
    const Key keys[4] = {{"luts", &budget.ceiling.luts},
                         {"regs", &budget.ceiling.regs},
                         {"clbs", &budget.ceiling.clbs},
                         {"dsps", &budget.ceiling.dsps}};
    for (const Key& k : keys) {
        if (!doc.contains(k.name) || !doc[k.name].is_number_integer())
            throw parse_error(path + ": budget needs integer field '" + k.name + "'");
        *k.slot = doc[k.name].get<std::int64_t>();
        if (*k.slot < 0) throw parse_error(path + ": budget field '" + k.name + "' is negative");
    }
    return budget;
}

// Ascii PGM with the inverse +128 bias; only 8-bit-or-narrower data has
// a faithful unsigned image encoding.
inline void write_pgm(const std::string& path, const ImagePlane& img) {
    if (img.bit_width > 8) throw width_error("PGM output is limited to 8-bit data");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write " + path);
    out << "P2\n" << img.width << ' ' << img.height << "\n255\n";
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (c) out << ' ';
            out << img.at(r, c) + 128;
        }
        out << '\n';
    }
}

inline void write_csv_plane(const std::string& path, const AccPlane& plane) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write " + path);
    for (int r = 0; r < plane.height; ++r) {
        for (int c = 0; c < plane.width; ++c) {
            if (c) out << ',';
            out << plane.at(r, c);
        }
        out << '\n';
    }
}

}  // namespace convip
