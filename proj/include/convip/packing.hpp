#pragma once

// Dual-product operand packing: two independent 8-bit products from one
// wide multiplication, the trick that lets the Conv_3 engine run two
// convolutions on a single DSP slice.
//
// The two data operands are packed into disjoint bit fields of one wide
// word, (a << 18) + b, and that 27-bit word is multiplied once by the
// shared coefficient w. The product is
//
//     wide = (a*w) << 18 + (b*w)
//
// b*w occupies the low 18-bit field (16-bit products leave two guard
// bits), a*w sits above it. When b*w is negative its two's-complement
// representation borrows 1 from the high field, so the extracted high
// field must be incremented to recover a*w. The exhaustive sweep in the
// verification suite pins this identity over the full 8-bit cube.

#include <cstdint>

#include "convip/errors.hpp"
#include "convip/fixed_point.hpp"

namespace convip {

// Field separation between the two products inside the wide word. 18
// bits mirrors the low operand port of a 27x18-style hard multiplier:
// the packed operand needs 27 signed bits (the a = b = -128 corner is
// -(2^25 + 128)), the wide product at most 34.
inline constexpr int kDualFieldOffset = 18;

// The single wide product holding both results before extraction.
struct PackedProduct {
    std::int64_t wide_raw = 0;
    int offset_bits = kDualFieldOffset;
};

struct DualProduct {
    std::int32_t pa = 0;  // a * w
    std::int32_t pb = 0;  // b * w

    friend bool operator==(const DualProduct&, const DualProduct&) = default;
};

namespace detail {

inline void require_int8(std::int32_t v, const char* role) {
    if (!fits_signed(v, 8))
        throw width_error(std::string(role) + " operand " + std::to_string(v) +
                          " exceeds 8 signed bits");
}

}  // namespace detail

// One wide multiply of the packed operand by w. `wide_multiplies`, when
// given, counts each hardware-style multiplication so tests can confirm
// the two-products-per-multiply structure.
inline PackedProduct packed_multiply_wide(std::int32_t a, std::int32_t b, std::int32_t w,
                                          std::uint64_t* wide_multiplies = nullptr) {
    detail::require_int8(a, "high-field");
    detail::require_int8(b, "low-field");
    detail::require_int8(w, "coefficient");
    const std::int64_t packed = (static_cast<std::int64_t>(a) << kDualFieldOffset) + b;
    if (wide_multiplies) ++*wide_multiplies;
    return PackedProduct{packed * w, kDualFieldOffset};
}

// Split the wide product back into the two exact products.
inline DualProduct extract_products(const PackedProduct& p) {
    const std::int64_t field_mask = (std::int64_t{1} << p.offset_bits) - 1;
    std::int64_t low = p.wide_raw & field_mask;
    if (low >= (std::int64_t{1} << (p.offset_bits - 1)))
        low -= std::int64_t{1} << p.offset_bits;  // sign-extend the low field
    std::int64_t high = p.wide_raw >> p.offset_bits;
    if (low < 0) high += 1;  // undo the borrow the negative low field took
    return DualProduct{static_cast<std::int32_t>(high), static_cast<std::int32_t>(low)};
}

// p_a = a*w and p_b = b*w, computed through the single wide multiply.
inline DualProduct packed_dual_multiply(std::int32_t a, std::int32_t b, std::int32_t w,
                                        std::uint64_t* wide_multiplies = nullptr) {
    return extract_products(packed_multiply_wide(a, b, w, wide_multiplies));
}

}  // namespace convip
