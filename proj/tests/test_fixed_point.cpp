#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "convip/fixed_point.hpp"

using namespace convip;

namespace {

// Independent oracle: enumerate every representable raw and pick the
// nearest to x, preferring the larger raw on exact ties (half-up).
std::int32_t nearest_raw(double x, QFormat fmt) {
    std::int32_t best = fmt.min_raw();
    double best_err = std::abs(static_cast<double>(best) - x * std::ldexp(1.0, fmt.frac_bits));
    for (std::int64_t raw = fmt.min_raw() + 1; raw <= fmt.max_raw(); ++raw) {
        const double err = std::abs(static_cast<double>(raw) - x * std::ldexp(1.0, fmt.frac_bits));
        if (err < best_err || (err == best_err && raw > best)) {
            best = static_cast<std::int32_t>(raw);
            best_err = err;
        }
    }
    return best;
}

}  // namespace

TEST(QFormatTest, ValidatesWidths) {
    EXPECT_NO_THROW(QFormat(2, 0));
    EXPECT_NO_THROW(QFormat(32, 31));
    EXPECT_THROW(QFormat(1, 0), width_error);
    EXPECT_THROW(QFormat(33, 0), width_error);
    EXPECT_THROW(QFormat(8, 8), width_error);
    EXPECT_THROW(QFormat(8, -1), width_error);
}

TEST(QFormatTest, RawRange) {
    const QFormat q8(8, 0);
    EXPECT_EQ(q8.min_raw(), -128);
    EXPECT_EQ(q8.max_raw(), 127);
    const QFormat q20(20, 0);
    EXPECT_EQ(q20.min_raw(), -(1 << 19));
    EXPECT_EQ(q20.max_raw(), (1 << 19) - 1);
    EXPECT_TRUE(q8.holds(127));
    EXPECT_FALSE(q8.holds(128));
}

TEST(FixedValueTest, ConstructorRejectsOutOfRange) {
    EXPECT_NO_THROW(FixedValue(127, QFormat(8, 0)));
    EXPECT_THROW(FixedValue(128, QFormat(8, 0)), range_error);
    EXPECT_THROW(FixedValue(-129, QFormat(8, 0)), range_error);
}

TEST(QuantizeTest, Zero) {
    EXPECT_EQ(quantize(0.0, QFormat(8, 0)).raw, 0);
}

TEST(QuantizeTest, SaturatesAtPlusOneInQ8_7) {
    // +1.0 needs raw 128, one past the two's-complement ceiling
    EXPECT_EQ(quantize(1.0, QFormat(8, 7)).raw, 127);
    EXPECT_EQ(quantize(1.0, QFormat(8, 7), Rounding::truncate).raw, 127);
    EXPECT_EQ(quantize(-1.0, QFormat(8, 7)).raw, -128);
}

TEST(QuantizeTest, NearestAgainstEnumerationOracle) {
    const QFormat fmt(8, 7);
    EXPECT_EQ(quantize(0.503, fmt).raw, 64);  // 0.503 * 128 = 64.384
    EXPECT_EQ(quantize(0.503, fmt).raw, nearest_raw(0.503, fmt));
    for (double x : {-0.99, -0.5, -0.497, -0.003, 0.0, 0.25, 0.4999, 0.75, 0.9}) {
        EXPECT_EQ(quantize(x, fmt).raw, nearest_raw(x, fmt)) << "x=" << x;
    }
}

TEST(QuantizeTest, TruncateIsFloor) {
    const QFormat q8(8, 0);
    EXPECT_EQ(quantize(0.999, q8, Rounding::truncate).raw, 0);
    EXPECT_EQ(quantize(-0.1, q8, Rounding::truncate).raw, -1);
    EXPECT_EQ(quantize(2.7, q8, Rounding::truncate).raw, 2);
    EXPECT_EQ(quantize(-2.7, q8, Rounding::truncate).raw, -3);
}

TEST(QuantizeTest, HalfUpTiesGoTowardPositive) {
    const QFormat q8(8, 0);
    EXPECT_EQ(quantize(0.5, q8).raw, 1);
    EXPECT_EQ(quantize(-0.5, q8).raw, 0);  // floor(-0.5 + 0.5) = 0
    EXPECT_EQ(quantize(1.5, q8).raw, 2);
    EXPECT_EQ(quantize(-1.5, q8).raw, -1);
}

TEST(QuantizeTest, MonotoneInX) {
    const QFormat fmt(8, 4);
    std::int32_t prev = quantize(-9.0, fmt).raw;
    for (double x = -9.0; x <= 9.0; x += 0.01) {
        const std::int32_t cur = quantize(x, fmt).raw;
        EXPECT_GE(cur, prev) << "x=" << x;
        prev = cur;
    }
}

TEST(QuantizeTest, ErrorBoundInsideRange) {
    const QFormat fmt(8, 5);
    const double res = std::ldexp(1.0, -fmt.frac_bits);
    for (double x = -3.5; x <= 3.5; x += 0.013) {
        const FixedValue v = quantize(x, fmt);
        EXPECT_LE(std::abs(v.to_real() - x), res) << "x=" << x;
    }
}

TEST(FullMultiplyTest, CornerProducts) {
    const QFormat q8(8, 0);
    const FixedValue m128(-128, q8);
    const FixedValue r = full_multiply(m128, m128);
    EXPECT_EQ(r.raw, 16384);
    EXPECT_EQ(r.format.total_bits, 16);
    EXPECT_EQ(r.format.frac_bits, 0);

    EXPECT_EQ(full_multiply(FixedValue(0, q8), FixedValue(-77, q8)).raw, 0);
    EXPECT_EQ(full_multiply(FixedValue(127, q8), FixedValue(-1, q8)).raw, -127);
}

TEST(FullMultiplyTest, FractionBitsAdd) {
    const FixedValue a(3, QFormat(8, 2));
    const FixedValue b(5, QFormat(8, 3));
    const FixedValue r = full_multiply(a, b);
    EXPECT_EQ(r.raw, 15);
    EXPECT_EQ(r.format.total_bits, 16);
    EXPECT_EQ(r.format.frac_bits, 5);
}

TEST(FullMultiplyTest, Commutes) {
    const QFormat q8(8, 0);
    for (int a = -128; a <= 127; a += 17) {
        for (int b = -128; b <= 127; b += 13) {
            const FixedValue fa(a, q8), fb(b, q8);
            EXPECT_EQ(full_multiply(fa, fb).raw, full_multiply(fb, fa).raw);
        }
    }
}

TEST(FullMultiplyTest, RejectsCombinedWidthOver32) {
    const FixedValue wide(0, QFormat(17, 0));
    const FixedValue narrow(0, QFormat(16, 0));
    EXPECT_THROW(full_multiply(wide, narrow), width_error);
    EXPECT_NO_THROW(full_multiply(narrow, narrow));
}

TEST(AccumulateTest, SingleAndRepeated) {
    const QFormat acc_fmt(20, 0);
    const QFormat prod_fmt(16, 0);
    FixedValue acc(0, acc_fmt);
    acc = accumulate(acc, FixedValue(16384, prod_fmt), acc_fmt);
    EXPECT_EQ(acc.raw, 16384);

    // nine worst-case products: 9 * (-128)^2 = 147456 < 2^19
    acc = FixedValue(0, acc_fmt);
    for (int i = 0; i < 9; ++i) acc = accumulate(acc, FixedValue(16384, prod_fmt), acc_fmt);
    EXPECT_EQ(acc.raw, 147456);
    EXPECT_LT(acc.raw, 1 << 19);
}

TEST(AccumulateTest, OverflowRaises) {
    const QFormat acc_fmt(20, 0);
    const FixedValue at_max((1 << 19) - 1, acc_fmt);
    EXPECT_THROW(accumulate(at_max, FixedValue(1, QFormat(16, 0)), acc_fmt), overflow_error);
    const FixedValue at_min(-(1 << 19), acc_fmt);
    EXPECT_THROW(accumulate(at_min, FixedValue(-1, QFormat(16, 0)), acc_fmt), overflow_error);
}

TEST(RequantizeTest, SaturationAndIdentity) {
    const QFormat q20(20, 0), q8(8, 0);
    EXPECT_EQ(requantize(FixedValue(147456, q20), q8).raw, 127);
    EXPECT_EQ(requantize(FixedValue(-147456, q20), q8).raw, -128);
    EXPECT_EQ(requantize(FixedValue(-5, q20), q8).raw, -5);
    EXPECT_EQ(requantize(FixedValue(129, QFormat(20, 4)), QFormat(8, 4)).raw, 127);
}

TEST(RequantizeTest, RoundTripSameFormat) {
    const QFormat fmt(12, 5);
    for (std::int32_t raw : {-2048, -77, -1, 0, 1, 1023, 2047}) {
        const FixedValue v(raw, fmt);
        EXPECT_EQ(requantize(v, fmt).raw, raw);
    }
}

TEST(RequantizeTest, HalfUpAndTruncateOnNarrowing) {
    // dropping one fraction bit: 3/2 rounds half-up to 2, truncates to 1
    EXPECT_EQ(requantize(FixedValue(3, QFormat(20, 1)), QFormat(8, 0)).raw, 2);
    EXPECT_EQ(requantize(FixedValue(3, QFormat(20, 1)), QFormat(8, 0), Rounding::truncate).raw, 1);
    // -3/2 = -1.5 rounds half-up (toward positive) to -1, truncates to -2
    EXPECT_EQ(requantize(FixedValue(-3, QFormat(20, 1)), QFormat(8, 0)).raw, -1);
    EXPECT_EQ(requantize(FixedValue(-3, QFormat(20, 1)), QFormat(8, 0), Rounding::truncate).raw, -2);
}

TEST(RequantizeTest, RaisesWithoutSaturation) {
    EXPECT_THROW(requantize(FixedValue(1000, QFormat(20, 0)), QFormat(8, 0),
                            Rounding::half_up, /*saturate=*/false),
                 range_error);
    EXPECT_NO_THROW(requantize(FixedValue(100, QFormat(20, 0)), QFormat(8, 0),
                               Rounding::half_up, /*saturate=*/false));
}

TEST(RequantizeTest, WideningShiftIsExact) {
    const FixedValue v(7, QFormat(8, 0));
    const FixedValue w = requantize(v, QFormat(20, 8));
    EXPECT_EQ(w.raw, 7 << 8);
    EXPECT_DOUBLE_EQ(w.to_real(), 7.0);
}

TEST(RequantizeRawTest, HandlesWideAccumulators) {
    // raw values beyond int32 still narrow correctly
    EXPECT_EQ(requantize_raw(std::int64_t{1} << 40, 0, QFormat(8, 0)), 127);
    EXPECT_EQ(requantize_raw(-(std::int64_t{1} << 40), 0, QFormat(8, 0)), -128);
    // widening a huge raw saturates instead of overflowing the shift
    EXPECT_EQ(requantize_raw(std::int64_t{1} << 60, 10, QFormat(32, 20)),
              QFormat(32, 20).max_raw());
}
