#pragma once

// Convolution workload containers: a row-major pixel plane, a kernel in
// serial (row-major) load order, and the full-precision accumulator
// plane the engines and the golden model both produce.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "convip/errors.hpp"
#include "convip/fixed_point.hpp"

namespace convip {

// Sufficient accumulator width for k*k products of in_bits x w_bits
// operands: the product needs in+w bits, summing k^2 of them adds
// ceil(log2(k^2)) growth bits. 8-bit data with a 3x3 kernel gives 20,
// comfortably holding the worst case 9 * 2^14 = 147456.
inline int accumulator_bits(int in_bits, int w_bits, int k) {
    const unsigned taps = static_cast<unsigned>(k) * static_cast<unsigned>(k);
    return in_bits + w_bits + static_cast<int>(std::bit_width(taps - 1));
}

struct ImagePlane {
    int width = 0;
    int height = 0;
    int bit_width = 8;
    std::vector<std::int32_t> pixels;  // row-major, width * height signed raws

    ImagePlane() = default;
    ImagePlane(int w, int h, int bits, std::vector<std::int32_t> px)
        : width(w), height(h), bit_width(bits), pixels(std::move(px)) {
        if (w <= 0 || h <= 0)
            throw dimension_error("image dimensions must be positive");
        if (bits < 2 || bits > 16)
            throw width_error("image bit width must be in [2,16]");
        if (pixels.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h))
            throw dimension_error("pixel count " + std::to_string(pixels.size()) + " != " +
                                  std::to_string(w) + "x" + std::to_string(h));
        for (std::int32_t p : pixels)
            if (!fits_signed(p, bits))
                throw width_error("pixel " + std::to_string(p) + " does not fit " +
                                  std::to_string(bits) + " signed bits");
    }

    std::int32_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

struct Kernel {
    int side = 3;
    int bit_width = 8;
    std::vector<std::int32_t> coeffs;  // k*k raws in serial load order: row-major, top-left first

    Kernel() = default;
    Kernel(int k, int bits, std::vector<std::int32_t> c)
        : side(k), bit_width(bits), coeffs(std::move(c)) {
        if (k <= 0)
            throw dimension_error("kernel side must be positive");
        if (bits < 2 || bits > 16)
            throw width_error("kernel bit width must be in [2,16]");
        if (coeffs.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(k))
            throw dimension_error("kernel needs " + std::to_string(k * k) + " coefficients, got " +
                                  std::to_string(coeffs.size()));
        for (std::int32_t c0 : coeffs)
            if (!fits_signed(c0, bits))
                throw width_error("coefficient " + std::to_string(c0) + " does not fit " +
                                  std::to_string(bits) + " signed bits");
    }

    std::int32_t at(int row, int col) const { return coeffs[static_cast<std::size_t>(row) * side + col]; }
};

// Full-precision outputs. acc_bits is the sufficient width above; values
// are kept wide so engine-vs-golden comparison is exact raw equality.
struct AccPlane {
    int width = 0;
    int height = 0;
    int acc_bits = 20;
    std::vector<std::int64_t> values;

    std::int64_t at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }

    friend bool operator==(const AccPlane& a, const AccPlane& b) {
        return a.width == b.width && a.height == b.height && a.values == b.values;
    }
};

// All k x k windows of the image in output raster order; the per-cycle
// parallel data loads of the engines.
inline std::vector<std::vector<std::int32_t>> extract_windows(const ImagePlane& img, int k) {
    if (k <= 0)
        throw dimension_error("window side must be positive");
    if (img.width < k || img.height < k)
        throw dimension_error("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                              " smaller than " + std::to_string(k) + "x" + std::to_string(k) + " kernel");
    const int out_w = img.width - k + 1;
    const int out_h = img.height - k + 1;
    std::vector<std::vector<std::int32_t>> windows;
    windows.reserve(static_cast<std::size_t>(out_w) * out_h);
    for (int r = 0; r < out_h; ++r) {
        for (int c = 0; c < out_w; ++c) {
            std::vector<std::int32_t> win(static_cast<std::size_t>(k) * k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    win[static_cast<std::size_t>(i) * k + j] = img.at(r + i, c + j);
            windows.push_back(std::move(win));
        }
    }
    return windows;
}

}  // namespace convip
