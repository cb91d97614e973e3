#pragma once

// Reference 2-D convolution. Every engine variant must match this
// bit-for-bit; the test suite in turn checks it against a second,
// independently written brute-force implementation.

#include <cstdint>

#include "convip/image.hpp"

namespace convip {

// Valid-padding, stride-1 cross-correlation (no kernel flip), exact
// integer arithmetic at full accumulator precision.
inline AccPlane convolve_golden(const ImagePlane& img, const Kernel& ker) {
    const int k = ker.side;
    if (img.width < k || img.height < k)
        throw dimension_error("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                              " smaller than kernel side " + std::to_string(k));
    AccPlane out;
    out.width = img.width - k + 1;
    out.height = img.height - k + 1;
    out.acc_bits = accumulator_bits(img.bit_width, ker.bit_width, k);
    out.values.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            std::int64_t acc = 0;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    acc += static_cast<std::int64_t>(img.at(r + i, c + j)) * ker.at(i, j);
            if (!fits_signed(acc, out.acc_bits))
                throw overflow_error("golden accumulator exceeded its sufficient width");
            out.values[static_cast<std::size_t>(r) * out.width + c] = acc;
        }
    }
    return out;
}

}  // namespace convip
