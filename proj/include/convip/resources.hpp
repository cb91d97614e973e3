#pragma once

// Per-variant resource/timing/power profiles measured on a Zynq
// UltraScale+ ZCU104 at 200 MHz, plus linear resource accounting over
// collections of engine instances. WNS and power are carried as
// report-only metadata: power does not compose linearly and timing is a
// property of a placed design, so neither is ever summed or predicted.

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "convip/engine.hpp"
#include "convip/errors.hpp"

namespace convip {

// One point in the FPGA fabric: soft-logic LUTs, registers, the CLBs
// grouping them, and hard DSP slices. Comparison is componentwise.
struct ResourceVector {
    std::int64_t luts = 0;
    std::int64_t regs = 0;
    std::int64_t clbs = 0;
    std::int64_t dsps = 0;

    friend ResourceVector operator+(const ResourceVector& a, const ResourceVector& b) {
        return {a.luts + b.luts, a.regs + b.regs, a.clbs + b.clbs, a.dsps + b.dsps};
    }

    friend ResourceVector operator-(const ResourceVector& a, const ResourceVector& b) {
        return {a.luts - b.luts, a.regs - b.regs, a.clbs - b.clbs, a.dsps - b.dsps};
    }

    bool fits_within(const ResourceVector& ceiling) const {
        return luts <= ceiling.luts && regs <= ceiling.regs && clbs <= ceiling.clbs &&
               dsps <= ceiling.dsps;
    }

    bool non_negative() const { return luts >= 0 && regs >= 0 && clbs >= 0 && dsps >= 0; }

    friend bool operator==(const ResourceVector&, const ResourceVector&) = default;
};

// Calibrated single-instance profile of one engine variant.
struct IpProfile {
    IpVariant variant{};
    ResourceVector resources{};
    double wns_ns = 0.0;   // worst negative slack at 200 MHz, metadata only
    double power_w = 0.0;  // total on-chip power, metadata only
    int outputs_per_cycle = 1;
    int max_operand_bits = 16;
};

inline const std::array<IpProfile, 4>& builtin_profiles() {
    static const std::array<IpProfile, 4> profiles = {{
        {IpVariant::conv1, {105, 54, 15, 0}, 2.596, 0.593, 1, 16},
        {IpVariant::conv2, {30, 22, 5, 1}, 2.276, 0.594, 1, 16},
        {IpVariant::conv3, {45, 32, 10, 1}, 2.086, 0.594, 2, 8},
        {IpVariant::conv4, {42, 23, 8, 2}, 2.870, 0.596, 2, 16},
    }};
    return profiles;
}

inline const IpProfile& profile_of(IpVariant v) {
    return builtin_profiles()[static_cast<std::size_t>(v)];
}

// Instance counts per variant, indexed in Conv_1..Conv_4 order.
using VariantCounts = std::array<std::int64_t, 4>;

inline std::int64_t count_of(const VariantCounts& counts, IpVariant v) {
    return counts[static_cast<std::size_t>(v)];
}

// The available fabric an allocation must fit inside.
struct Budget {
    ResourceVector ceiling{};
};

namespace detail {

inline std::int64_t checked_mul_add(std::int64_t acc, std::int64_t count, std::int64_t unit) {
    std::int64_t product = 0;
    if (__builtin_mul_overflow(count, unit, &product) || __builtin_add_overflow(acc, product, &acc))
        throw overflow_error("resource aggregate overflows 64 bits");
    return acc;
}

}  // namespace detail

// Componentwise sum of count * unit-cost over all variants. Linear by
// construction: the profiles are single-instance measurements and carry
// no sharing or routing model.
inline ResourceVector aggregate(const VariantCounts& counts) {
    ResourceVector total;
    for (IpVariant v : kAllVariants) {
        const std::int64_t n = count_of(counts, v);
        if (n < 0)
            throw overflow_error("instance counts must be non-negative");
        const ResourceVector& unit = profile_of(v).resources;
        total.luts = detail::checked_mul_add(total.luts, n, unit.luts);
        total.regs = detail::checked_mul_add(total.regs, n, unit.regs);
        total.clbs = detail::checked_mul_add(total.clbs, n, unit.clbs);
        total.dsps = detail::checked_mul_add(total.dsps, n, unit.dsps);
    }
    return total;
}

inline bool fits(const VariantCounts& counts, const Budget& budget) {
    return aggregate(counts).fits_within(budget.ceiling);
}

}  // namespace convip
