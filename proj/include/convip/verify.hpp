#pragma once

// Built-in self checks, exposed through the `verify` subcommand and
// reused by the test suite.
//
// The packing sweep is exhaustive: all 256^3 = 16777216 combinations of
// signed 8-bit (a, b, w) go through the shared-multiplier path and are
// compared against two plain products. The instrumentation counter must
// come back equal to the case count, one wide multiply per pair.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "convip/engine.hpp"
#include "convip/golden.hpp"
#include "convip/image.hpp"
#include "convip/packing.hpp"

namespace convip {

struct PackingSweepResult {
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    std::uint64_t wide_multiplies = 0;

    bool ok() const { return failures == 0 && wide_multiplies == cases; }
};

inline PackingSweepResult sweep_packing_exhaustive() {
    PackingSweepResult res;
    for (int w = -128; w <= 127; ++w)
        for (int a = -128; a <= 127; ++a)
            for (int b = -128; b <= 127; ++b) {
                DualProduct got = packed_dual_multiply(a, b, w, &res.wide_multiplies);
                ++res.cases;
                if (got.pa != a * w || got.pb != b * w) ++res.failures;
            }
    return res;
}

struct EngineCheckResult {
    IpVariant variant = IpVariant::conv1;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;

    bool ok() const { return failures == 0; }
};

// One randomized round trip: draw dimensions, data and weights, run the
// engine model, and demand bit-identical planes from the reference
// convolution. Cycle counts are checked against the closed form.
inline bool engine_case_matches(IpVariant v, std::mt19937_64& rng) {
    const VariantTraits& tr = traits(v);
    std::uniform_int_distribution<int> side_dist(3, 4);
    const int k = side_dist(rng);
    std::uniform_int_distribution<int> dim_dist(k, k + 9);
    const int width = dim_dist(rng);
    const int height = dim_dist(rng);
    std::uniform_int_distribution<int> bits_dist(2, tr.max_operand_bits);
    const int bits = bits_dist(rng);

    std::uniform_int_distribution<std::int32_t> val_dist(signed_min(bits), signed_max(bits));
    auto draw_plane = [&] {
        std::vector<std::int32_t> px(static_cast<std::size_t>(width) * height);
        for (auto& p : px) p = val_dist(rng);
        return ImagePlane(width, height, bits, std::move(px));
    };
    std::vector<std::int32_t> coeffs(static_cast<std::size_t>(k) * k);
    for (auto& c : coeffs) c = val_dist(rng);
    Kernel ker(k, bits, std::move(coeffs));

    std::vector<ImagePlane> streams;
    streams.push_back(draw_plane());
    const bool paired = tr.outputs_per_cycle == 2 && (rng() & 1u);
    if (paired) streams.push_back(draw_plane());

    RunResult run = run_layer(v, streams, ker, bits);
    if (run.planes.size() != streams.size()) return false;
    for (std::size_t i = 0; i < streams.size(); ++i)
        if (!(run.planes[i] == convolve_golden(streams[i], ker))) return false;

    const std::int64_t windows =
        static_cast<std::int64_t>(width - k + 1) * (height - k + 1) * streams.size();
    const std::int64_t data_cycles = (windows + tr.outputs_per_cycle - 1) / tr.outputs_per_cycle;
    if (run.cycles != k * k + data_cycles + kPipelineLatency) return false;
    return true;
}

inline EngineCheckResult check_engine(IpVariant v, std::uint64_t cases, std::uint64_t seed) {
    EngineCheckResult res;
    res.variant = v;
    // per-variant stream so adding variants never shifts existing draws
    std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(v));
    for (std::uint64_t i = 0; i < cases; ++i) {
        ++res.cases;
        if (!engine_case_matches(v, rng)) ++res.failures;
    }
    return res;
}

struct VerifyReport {
    PackingSweepResult packing;
    bool packing_ran = false;
    std::vector<EngineCheckResult> engines;

    bool ok() const {
        if (packing_ran && !packing.ok()) return false;
        for (const EngineCheckResult& e : engines)
            if (!e.ok()) return false;
        return true;
    }
};

inline VerifyReport run_verify(std::uint64_t cases_per_variant, std::uint64_t seed,
                               bool exhaustive_packing) {
    VerifyReport rep;
    if (exhaustive_packing) {
        rep.packing = sweep_packing_exhaustive();
        rep.packing_ran = true;
    }
    for (IpVariant v : kAllVariants) rep.engines.push_back(check_engine(v, cases_per_variant, seed));
    return rep;
}

inline std::string verify_text(const VerifyReport& rep) {
    std::ostringstream out;
    if (rep.packing_ran)
        out << "packing " << rep.packing.cases << " packed cases, " << rep.packing.failures
            << " failures, " << rep.packing.wide_multiplies << " wide multiplies\n";
    for (const EngineCheckResult& e : rep.engines) {
        out << variant_name(e.variant) << ' ' << (e.cases - e.failures) << '/' << e.cases
            << " bit-identical";
        if (e.failures) out << " (" << e.failures << " failures)";
        out << '\n';
    }
    out << (rep.ok() ? "verify ok" : "verify FAILED") << '\n';
    return out.str();
}

}  // namespace convip
