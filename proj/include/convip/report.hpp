#pragma once

// Text and JSON renderings of library results for the command-line
// front end. The profile table rows are stable: single-space separated,
// timing slack and power with three decimals, e.g.
//
//   Conv_1 105 54 15 0 2.596 0.593
//
// Downstream scripts key on those rows, so changes here are breaking.

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convip/allocate.hpp"
#include "convip/engine.hpp"
#include "convip/image.hpp"
#include "convip/resources.hpp"

namespace convip {

// FNV-1a, 64-bit; stable across platforms for the summary checksum.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 14695981039346656037ULL) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t checksum_plane(const AccPlane& plane) {
    std::uint64_t h = fnv1a64(nullptr, 0);
    auto mix = [&h](std::int64_t v) {
        unsigned char le[8];
        for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
        h = fnv1a64(le, 8, h);
    };
    mix(plane.width);
    mix(plane.height);
    for (std::int64_t v : plane.values) mix(v);
    return h;
}

inline std::string checksum_hex(std::uint64_t h) {
    std::ostringstream out;
    out << "0x" << std::hex << std::setfill('0') << std::setw(16) << h;
    return out.str();
}

// ---- profile ----------------------------------------------------------

inline std::string profile_row(const IpProfile& p) {
    std::ostringstream out;
    out << variant_name(p.variant) << ' ' << p.resources.luts << ' ' << p.resources.regs << ' '
        << p.resources.clbs << ' ' << p.resources.dsps << ' ' << std::fixed
        << std::setprecision(3) << p.wns_ns << ' ' << p.power_w;
    return out.str();
}

inline std::string profile_text() {
    std::ostringstream out;
    out << "variant luts regs clbs dsps wns_ns power_w\n";
    for (const IpProfile& p : builtin_profiles()) out << profile_row(p) << '\n';
    return out.str();
}

inline nlohmann::json profile_json() {
    nlohmann::json rows = nlohmann::json::array();
    for (const IpProfile& p : builtin_profiles()) {
        rows.push_back({{"variant", variant_name(p.variant)},
                        {"luts", p.resources.luts},
                        {"regs", p.resources.regs},
                        {"clbs", p.resources.clbs},
                        {"dsps", p.resources.dsps},
                        {"wns_ns", p.wns_ns},
                        {"power_w", p.power_w},
                        {"outputs_per_cycle", p.outputs_per_cycle},
                        {"max_operand_bits", p.max_operand_bits}});
    }
    return rows;
}

// ---- simulate ---------------------------------------------------------

inline std::string simulate_text(IpVariant v, const RunResult& run) {
    std::ostringstream out;
    out << "variant " << variant_name(v) << '\n'
        << "streams " << run.planes.size() << '\n'
        << "cycles " << run.cycles << '\n'
        << "steady_outputs_per_cycle " << run.steady_outputs_per_cycle << '\n';
    if (v == IpVariant::conv3) out << "wide_multiplies " << run.wide_multiplies << '\n';
    for (std::size_t i = 0; i < run.planes.size(); ++i) {
        const AccPlane& p = run.planes[i];
        out << "output " << i << ' ' << p.width << 'x' << p.height << " acc_bits " << p.acc_bits
            << " checksum " << checksum_hex(checksum_plane(p)) << '\n';
    }
    return out.str();
}

inline nlohmann::json simulate_json(IpVariant v, const RunResult& run) {
    nlohmann::json planes = nlohmann::json::array();
    for (const AccPlane& p : run.planes) {
        planes.push_back({{"width", p.width},
                          {"height", p.height},
                          {"acc_bits", p.acc_bits},
                          {"checksum", checksum_hex(checksum_plane(p))},
                          {"values", p.values}});
    }
    nlohmann::json doc = {{"variant", variant_name(v)},
                          {"streams", run.planes.size()},
                          {"cycles", run.cycles},
                          {"steady_outputs_per_cycle", run.steady_outputs_per_cycle},
                          {"outputs", planes}};
    if (v == IpVariant::conv3) doc["wide_multiplies"] = run.wide_multiplies;
    return doc;
}

// ---- allocate ---------------------------------------------------------

inline std::string allocate_text(const AllocationReport& rep) {
    std::ostringstream out;
    for (std::size_t i = 0; i < kAllVariants.size(); ++i)
        out << variant_name(kAllVariants[i]) << " x" << rep.allocation.counts[i] << '\n';
    out << "throughput " << rep.allocation.throughput << '\n';
    if (rep.effective_throughput != rep.allocation.throughput)
        out << "effective_throughput " << rep.effective_throughput << '\n';
    const ResourceVector& u = rep.allocation.used;
    const ResourceVector& r = rep.residual;
    out << "used luts " << u.luts << " regs " << u.regs << " clbs " << u.clbs << " dsps "
        << u.dsps << '\n';
    out << "residual luts " << r.luts << " regs " << r.regs << " clbs " << r.clbs << " dsps "
        << r.dsps << '\n';
    out << "binding";
    if (rep.binding.empty()) {
        out << " none";
    } else {
        for (const std::string& d : rep.binding) {
            out << ' ' << d;
            for (const std::string& t : rep.binding_trivial)
                if (t == d) out << "(zero-budget)";
        }
    }
    out << '\n';
    return out.str();
}

inline nlohmann::json allocate_json(const AllocationReport& rep) {
    nlohmann::json counts;
    for (std::size_t i = 0; i < kAllVariants.size(); ++i)
        counts[variant_name(kAllVariants[i])] = rep.allocation.counts[i];
    auto vec = [](const ResourceVector& v) {
        return nlohmann::json{
            {"luts", v.luts}, {"regs", v.regs}, {"clbs", v.clbs}, {"dsps", v.dsps}};
    };
    return {{"counts", counts},
            {"throughput", rep.allocation.throughput},
            {"effective_throughput", rep.effective_throughput},
            {"used", vec(rep.allocation.used)},
            {"budget", vec(rep.budget)},
            {"residual", vec(rep.residual)},
            {"binding", rep.binding},
            {"binding_zero_budget", rep.binding_trivial}};
}

}  // namespace convip
