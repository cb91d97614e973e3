#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "convip/golden.hpp"
#include "convip/image.hpp"
#include "support/brute_force.hpp"

using namespace convip;

namespace {

ImagePlane random_image(int w, int h, int bits, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int32_t> dist(signed_min(bits), signed_max(bits));
    std::vector<std::int32_t> px(static_cast<std::size_t>(w) * h);
    for (auto& p : px) p = dist(rng);
    return ImagePlane(w, h, bits, std::move(px));
}

Kernel random_kernel(int k, int bits, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int32_t> dist(signed_min(bits), signed_max(bits));
    std::vector<std::int32_t> c(static_cast<std::size_t>(k) * k);
    for (auto& v : c) v = dist(rng);
    return Kernel(k, bits, std::move(c));
}

}  // namespace

TEST(AccumulatorBitsTest, SufficientWidthFormula) {
    // 8x8-bit products over 9 taps: 8 + 8 + ceil(log2(9)) = 20
    EXPECT_EQ(accumulator_bits(8, 8, 3), 20);
    EXPECT_EQ(accumulator_bits(8, 8, 1), 16);
    EXPECT_EQ(accumulator_bits(8, 8, 2), 18);
    EXPECT_EQ(accumulator_bits(16, 16, 3), 36);
}

TEST(ImagePlaneTest, Validation) {
    EXPECT_THROW(ImagePlane(0, 3, 8, {}), dimension_error);
    EXPECT_THROW(ImagePlane(2, 2, 8, {1, 2, 3}), dimension_error);
    EXPECT_THROW(ImagePlane(2, 2, 8, {1, 2, 3, 200}), width_error);
    EXPECT_THROW(ImagePlane(2, 2, 1, {0, 0, 0, 0}), width_error);
    EXPECT_NO_THROW(ImagePlane(2, 2, 8, {-128, 127, 0, 1}));
}

TEST(KernelTest, Validation) {
    EXPECT_THROW(Kernel(3, 8, {1, 2, 3}), dimension_error);
    EXPECT_THROW(Kernel(3, 4, {8, 0, 0, 0, 0, 0, 0, 0, 0}), width_error);
    EXPECT_NO_THROW(Kernel(3, 4, {7, -8, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(GoldenTest, IdentityKernelPicksCenter) {
    const ImagePlane img(3, 3, 8, {1, 2, 3, 4, 42, 6, 7, 8, 9});
    const Kernel identity(3, 8, {0, 0, 0, 0, 1, 0, 0, 0, 0});
    const AccPlane out = convolve_golden(img, identity);
    EXPECT_EQ(out.width, 1);
    EXPECT_EQ(out.height, 1);
    EXPECT_EQ(out.at(0, 0), 42);
}

TEST(GoldenTest, ConstantImageAllOnesKernel) {
    const std::int32_t v = -77;
    const ImagePlane img(6, 5, 8, std::vector<std::int32_t>(30, v));
    const Kernel ones(3, 8, std::vector<std::int32_t>(9, 1));
    const AccPlane out = convolve_golden(img, ones);
    EXPECT_EQ(out.width, 4);
    EXPECT_EQ(out.height, 3);
    for (std::int64_t o : out.values) EXPECT_EQ(o, 9 * v);
}

TEST(GoldenTest, MatchesIndependentBruteForce) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const ImagePlane img = random_image(8, 8, 8, rng);
        const Kernel ker = random_kernel(3, 8, rng);
        const AccPlane got = convolve_golden(img, ker);
        EXPECT_TRUE(testsupport::same(testsupport::conv_by_hand(img, ker), got)) << "trial " << trial;
    }
    // non-square images and a non-default kernel side
    for (int trial = 0; trial < 10; ++trial) {
        const ImagePlane img = random_image(9, 5, 6, rng);
        const Kernel ker = random_kernel(2, 6, rng);
        EXPECT_TRUE(testsupport::same(testsupport::conv_by_hand(img, ker), convolve_golden(img, ker)));
    }
}

TEST(GoldenTest, LinearityInTheKernel) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int32_t> small(-5, 5);
    const ImagePlane img = random_image(7, 7, 8, rng);
    std::vector<std::int32_t> c1(9), c2(9), mix(9);
    for (int i = 0; i < 9; ++i) {
        c1[i] = small(rng);
        c2[i] = small(rng);
    }
    const int a = 3, b = 2;
    for (int i = 0; i < 9; ++i) mix[i] = a * c1[i] + b * c2[i];  // |mix| <= 25, fits 8 bits
    const AccPlane o1 = convolve_golden(img, Kernel(3, 8, c1));
    const AccPlane o2 = convolve_golden(img, Kernel(3, 8, c2));
    const AccPlane om = convolve_golden(img, Kernel(3, 8, mix));
    for (std::size_t i = 0; i < om.values.size(); ++i)
        EXPECT_EQ(om.values[i], a * o1.values[i] + b * o2.values[i]);
}

TEST(GoldenTest, DeltaKernelShiftsImage) {
    std::mt19937_64 rng(11);
    const ImagePlane img = random_image(6, 6, 8, rng);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            std::vector<std::int32_t> delta(9, 0);
            delta[static_cast<std::size_t>(r) * 3 + c] = 1;
            const AccPlane out = convolve_golden(img, Kernel(3, 8, delta));
            for (int y = 0; y < out.height; ++y)
                for (int x = 0; x < out.width; ++x)
                    EXPECT_EQ(out.at(y, x), img.at(y + r, x + c));
        }
    }
}

TEST(GoldenTest, WorstCaseFitsTwentyBits) {
    // all pixels and coefficients at -128: each output is 9 * 2^14
    const ImagePlane img(8, 8, 8, std::vector<std::int32_t>(64, -128));
    const Kernel ker(3, 8, std::vector<std::int32_t>(9, -128));
    const AccPlane out = convolve_golden(img, ker);
    EXPECT_EQ(out.acc_bits, 20);
    for (std::int64_t o : out.values) {
        EXPECT_EQ(o, 147456);
        EXPECT_TRUE(fits_signed(o, 20));
    }
}

TEST(GoldenTest, ImageSmallerThanKernelRejected) {
    const ImagePlane img(2, 2, 8, {1, 2, 3, 4});
    const Kernel ker(3, 8, std::vector<std::int32_t>(9, 1));
    EXPECT_THROW(convolve_golden(img, ker), dimension_error);
}

TEST(ExtractWindowsTest, SingleWindowEqualsImage) {
    const ImagePlane img(3, 3, 8, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const auto windows = extract_windows(img, 3);
    ASSERT_EQ(windows.size(), 1u);
    EXPECT_EQ(windows[0], img.pixels);
}

TEST(ExtractWindowsTest, AdjacentWindowsShareSixPixels) {
    const ImagePlane img(4, 3, 8, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    const auto windows = extract_windows(img, 3);
    ASSERT_EQ(windows.size(), 2u);
    int shared = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 2; ++c)
            if (windows[0][static_cast<std::size_t>(r) * 3 + c + 1] ==
                windows[1][static_cast<std::size_t>(r) * 3 + c])
                ++shared;
    EXPECT_EQ(shared, 6);
}

TEST(ExtractWindowsTest, CountMatchesOutputPixels) {
    std::mt19937_64 rng(3);
    const ImagePlane img = random_image(8, 8, 8, rng);
    EXPECT_EQ(extract_windows(img, 3).size(), 36u);
    EXPECT_THROW(extract_windows(ImagePlane(2, 2, 8, {1, 2, 3, 4}), 3), dimension_error);
}
