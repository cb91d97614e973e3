#pragma once

// Two's-complement fixed-point scalars with explicit width, rounding and
// saturation. This is the numeric substrate of every engine model: all
// raw values are plain integers scaled by 2^-frac_bits, so every check
// in the test suite is exact.

#include <cmath>
#include <cstdint>
#include <string>

#include "convip/errors.hpp"

namespace convip {

// Largest / smallest raw value representable in `bits` signed bits.
constexpr std::int64_t signed_max(int bits) {
    return (std::int64_t{1} << (bits - 1)) - 1;
}

constexpr std::int64_t signed_min(int bits) {
    return -(std::int64_t{1} << (bits - 1));
}

constexpr bool fits_signed(std::int64_t v, int bits) {
    return v >= signed_min(bits) && v <= signed_max(bits);
}

enum class Rounding {
    half_up,    // round(x) = floor(x + 1/2); what "add half then truncate" hardware does
    truncate,   // drop fraction bits, i.e. floor; matches two's-complement bit truncation
};

// A Qm.n-style format: total_bits includes the sign bit, frac_bits of
// them are fractional. Signed two's complement always.
struct QFormat {
    int total_bits = 8;
    int frac_bits = 0;

    QFormat() = default;
    QFormat(int total, int frac) : total_bits(total), frac_bits(frac) {
        if (total < 2 || total > 32)
            throw width_error("QFormat total_bits must be in [2,32], got " + std::to_string(total));
        if (frac < 0 || frac >= total)
            throw width_error("QFormat frac_bits must be in [0,total_bits), got " + std::to_string(frac));
    }

    std::int64_t min_raw() const { return signed_min(total_bits); }
    std::int64_t max_raw() const { return signed_max(total_bits); }
    bool holds(std::int64_t raw) const { return fits_signed(raw, total_bits); }
    double resolution() const { return std::ldexp(1.0, -frac_bits); }

    std::string to_string() const {
        return "Q" + std::to_string(total_bits) + "." + std::to_string(frac_bits);
    }

    friend bool operator==(const QFormat& a, const QFormat& b) {
        return a.total_bits == b.total_bits && a.frac_bits == b.frac_bits;
    }
};

// One scalar: raw two's-complement integer plus its format. The
// constructor rejects out-of-range raws; ops that saturate do so
// explicitly.
struct FixedValue {
    std::int32_t raw = 0;
    QFormat format{};

    FixedValue() = default;
    FixedValue(std::int64_t raw_value, QFormat fmt) : raw(static_cast<std::int32_t>(raw_value)), format(fmt) {
        if (!fmt.holds(raw_value))
            throw range_error("raw " + std::to_string(raw_value) + " outside " + fmt.to_string());
    }

    double to_real() const { return std::ldexp(static_cast<double>(raw), -format.frac_bits); }

    friend bool operator==(const FixedValue& a, const FixedValue& b) {
        return a.raw == b.raw && a.format == b.format;
    }
};

namespace detail {

// Shift raw right by `shift` (> 0) with the chosen rounding. half_up is
// floor(x + 1/2) rather than round-away-from-zero, so -2.5 -> -2.
inline std::int64_t shift_right_rounded(std::int64_t raw, int shift, Rounding rounding) {
    if (rounding == Rounding::half_up) raw += std::int64_t{1} << (shift - 1);
    return raw >> shift;  // arithmetic shift: floor
}

}  // namespace detail

// Nearest representable value to the real number x, saturated to the
// format range. Saturation is the defined behavior at the edges, never
// an error.
inline FixedValue quantize(double x, QFormat fmt, Rounding rounding = Rounding::half_up) {
    double scaled = std::ldexp(x, fmt.frac_bits);
    double r = rounding == Rounding::half_up ? std::floor(scaled + 0.5) : std::floor(scaled);
    std::int64_t raw;
    if (r >= static_cast<double>(fmt.max_raw()))
        raw = fmt.max_raw();
    else if (r <= static_cast<double>(fmt.min_raw()))
        raw = fmt.min_raw();
    else
        raw = static_cast<std::int64_t>(r);
    return FixedValue{raw, fmt};
}

// Exact product. Result width is the sum of the operand widths, so the
// multiply itself can never overflow; combined widths past 32 bits are a
// datapath sizing error.
inline FixedValue full_multiply(FixedValue a, FixedValue b) {
    int total = a.format.total_bits + b.format.total_bits;
    if (total > 32)
        throw width_error("full_multiply result width " + std::to_string(total) + " exceeds 32 bits");
    QFormat out{total, a.format.frac_bits + b.format.frac_bits};
    std::int64_t product = static_cast<std::int64_t>(a.raw) * static_cast<std::int64_t>(b.raw);
    return FixedValue{product, out};
}

// acc + p, exactly, in acc_fmt. p is aligned to acc_fmt's fraction
// length first; an out-of-range sum raises, it never wraps.
inline FixedValue accumulate(FixedValue acc, FixedValue p, QFormat acc_fmt) {
    if (!(acc.format == acc_fmt))
        throw width_error("accumulator is " + acc.format.to_string() + ", expected " + acc_fmt.to_string());
    if (p.format.frac_bits > acc_fmt.frac_bits)
        throw width_error("addend fraction " + std::to_string(p.format.frac_bits) +
                          " does not align into " + acc_fmt.to_string());
    std::int64_t aligned = static_cast<std::int64_t>(p.raw) << (acc_fmt.frac_bits - p.format.frac_bits);
    std::int64_t sum = static_cast<std::int64_t>(acc.raw) + aligned;
    if (!acc_fmt.holds(sum))
        throw overflow_error("accumulator overflow: " + std::to_string(sum) + " outside " + acc_fmt.to_string());
    return FixedValue{sum, acc_fmt};
}

// Rescale a raw integer carrying frac_bits fractional bits into the
// target format. Shared by requantize() and the wide-accumulator
// narrowing path, where values may exceed the 32-bit FixedValue domain.
inline std::int64_t requantize_raw(std::int64_t raw, int frac_bits, QFormat target,
                                   Rounding rounding = Rounding::half_up, bool saturate = true) {
    int shift = frac_bits - target.frac_bits;
    std::int64_t shifted;
    if (shift > 0) {
        shifted = detail::shift_right_rounded(raw, shift, rounding);
    } else if (raw != 0 && !fits_signed(raw, 62 + shift)) {
        // Widening would overflow the 64-bit intermediate; the value is
        // far outside any representable target either way.
        if (!saturate)
            throw range_error("requantize: " + std::to_string(raw) + " does not fit " + target.to_string());
        return raw > 0 ? target.max_raw() : target.min_raw();
    } else {
        shifted = raw << -shift;
    }
    if (!target.holds(shifted)) {
        if (!saturate)
            throw range_error("requantize: " + std::to_string(shifted) + " outside " + target.to_string());
        shifted = shifted > 0 ? target.max_raw() : target.min_raw();
    }
    return shifted;
}

inline FixedValue requantize(FixedValue v, QFormat target, Rounding rounding = Rounding::half_up,
                             bool saturate = true) {
    return FixedValue{requantize_raw(v.raw, v.format.frac_bits, target, rounding, saturate), target};
}

}  // namespace convip
