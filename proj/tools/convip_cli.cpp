// Command-line front end: profile / simulate / allocate / verify.
//
// Exit codes, kept distinct so scripts can tell failure classes apart:
//   0  success, all embedded checks passed
//   2  usage error (bad flags, missing subcommand)
//   3  file-format error (image, kernel, or budget failed to parse)
//   4  constraint violation (width, range, dimension, phase, arity)
//   5  verification failure (self-check or oracle disagreement)

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convip/convip.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitConstraint = 4;
constexpr int kExitVerification = 5;

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const convip::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const convip::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConstraint;
    }
}

convip::IpVariant variant_from_flag(const std::string& s) {
    if (s == "conv1") return convip::IpVariant::conv1;
    if (s == "conv2") return convip::IpVariant::conv2;
    if (s == "conv3") return convip::IpVariant::conv3;
    return convip::IpVariant::conv4;
}

std::string numbered(const std::string& base, std::size_t index) {
    return index == 0 ? base : base + "." + std::to_string(index);
}

struct SimulateArgs {
    std::string variant = "conv1";
    std::vector<std::string> images;
    std::string kernel;
    int bits = 0;        // 0: derive from the data
    int requantize = 0;  // 0: keep full accumulator width
    std::string out;
    bool inject_fault = false;
    bool json = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const convip::IpVariant v = variant_from_flag(args.variant);
    std::vector<convip::ImagePlane> streams;
    for (const std::string& path : args.images)
        streams.push_back(convip::read_image(path, args.bits));
    const convip::Kernel ker = convip::read_kernel(args.kernel, args.bits);

    convip::RunResult run = convip::run_layer(v, streams, ker, args.bits);
    if (args.inject_fault && !run.planes.empty() && !run.planes[0].values.empty())
        run.planes[0].values[0] += 1;  // negative control for the golden check

    bool golden_ok = run.planes.size() == streams.size();
    for (std::size_t i = 0; golden_ok && i < streams.size(); ++i)
        golden_ok = run.planes[i] == convip::convolve_golden(streams[i], ker);

    if (!args.out.empty() || args.requantize > 0) {
        const std::string base =
            !args.out.empty() ? args.out
                              : args.images[0] + (args.requantize > 0 ? ".requant" : ".out");
        for (std::size_t i = 0; i < run.planes.size(); ++i) {
            const convip::AccPlane& plane = run.planes[i];
            if (args.requantize > 0) {
                const convip::QFormat target(args.requantize, 0);
                std::vector<std::int32_t> px;
                px.reserve(plane.values.size());
                for (std::int64_t raw : plane.values)
                    px.push_back(static_cast<std::int32_t>(
                        convip::requantize_raw(raw, 0, target)));
                if (args.requantize <= 8) {
                    convip::write_pgm(numbered(base, i) + ".pgm",
                                      convip::ImagePlane(plane.width, plane.height,
                                                         args.requantize, std::move(px)));
                } else {
                    convip::AccPlane narrowed{plane.width, plane.height, args.requantize, {}};
                    narrowed.values.assign(px.begin(), px.end());
                    convip::write_csv_plane(numbered(base, i) + ".csv", narrowed);
                }
            } else {
                convip::write_csv_plane(numbered(base, i), plane);
            }
        }
    }

    if (args.json) {
        nlohmann::json doc = convip::simulate_json(v, run);
        doc["golden"] = golden_ok;
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << convip::simulate_text(v, run)
                  << "golden " << (golden_ok ? "pass" : "FAIL") << '\n';
    }
    return golden_ok ? 0 : kExitVerification;
}

struct AllocateArgs {
    std::string budget;
    int bits = 8;
    std::int64_t streams = -1;  // <0: uncapped
    bool oracle = false;
    bool json = false;
};

int cmd_allocate(const AllocateArgs& args) {
    const convip::Budget budget = convip::read_budget(args.budget);
    convip::Workload wl;
    wl.operand_bits = args.bits;
    if (args.streams >= 0) wl.streams_wanted = args.streams;

    const convip::Allocation alloc = convip::allocate(budget, wl);
    const convip::AllocationReport rep = convip::explain(alloc, budget, wl);

    bool oracle_agree = true;
    if (args.oracle) {
        const convip::Allocation ref = convip::allocate_bruteforce(budget, wl);
        oracle_agree = ref.counts == alloc.counts;
    }

    if (args.json) {
        nlohmann::json doc = convip::allocate_json(rep);
        if (args.oracle) doc["oracle_agree"] = oracle_agree;
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << convip::allocate_text(rep);
        if (args.oracle) std::cout << "oracle " << (oracle_agree ? "agree" : "DISAGREE") << '\n';
    }
    return oracle_agree ? 0 : kExitVerification;
}

struct VerifyArgs {
    std::uint64_t cases = 50;
    std::uint64_t seed = 1;
    bool exhaustive_packing = true;
    bool json = false;
};

int cmd_verify(const VerifyArgs& args) {
    const convip::VerifyReport rep =
        convip::run_verify(args.cases, args.seed, args.exhaustive_packing);
    if (args.json) {
        nlohmann::json engines = nlohmann::json::array();
        for (const convip::EngineCheckResult& e : rep.engines)
            engines.push_back({{"variant", convip::variant_name(e.variant)},
                               {"cases", e.cases},
                               {"failures", e.failures}});
        nlohmann::json doc = {{"engines", engines}, {"ok", rep.ok()}};
        if (rep.packing_ran)
            doc["packing"] = {{"cases", rep.packing.cases},
                              {"failures", rep.packing.failures},
                              {"wide_multiplies", rep.packing.wide_multiplies}};
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << convip::verify_text(rep);
    }
    return rep.ok() ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bit-accurate models and resource allocation for the Conv_1..Conv_4 engines"};
    app.require_subcommand(1);

    CLI::App* profile = app.add_subcommand("profile", "Print the calibrated resource profiles");
    bool profile_json = false;
    profile->add_flag("--json", profile_json, "JSON output");

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Run one engine over image data");
    simulate->add_option("--variant", sim.variant, "Engine variant")
        ->required()
        ->check(CLI::IsMember({"conv1", "conv2", "conv3", "conv4"}));
    simulate->add_option("--image", sim.images, "Input image, PGM or CSV (repeat for two streams)")
        ->required()
        ->expected(1, 2);
    simulate->add_option("--kernel", sim.kernel, "Kernel coefficient file")->required();
    simulate->add_option("--bits", sim.bits, "Declared operand width")->check(CLI::Range(2, 32));
    simulate->add_option("--requantize", sim.requantize, "Requantize outputs to this width")
        ->check(CLI::Range(2, 32));
    simulate->add_option("--out", sim.out, "Output file base path");
    simulate->add_flag("--inject-fault", sim.inject_fault,
                       "Corrupt one output to exercise the golden check");
    simulate->add_flag("--json", sim.json, "JSON output");

    AllocateArgs alc;
    CLI::App* allocate = app.add_subcommand("allocate", "Pick engine counts for a budget");
    allocate->add_option("--budget", alc.budget, "Budget JSON file")->required();
    allocate->add_option("--bits", alc.bits, "Workload operand width")->required();
    allocate->add_option("--streams", alc.streams, "Cap on useful parallel streams");
    allocate->add_flag("--oracle", alc.oracle, "Cross-check against brute-force enumeration");
    allocate->add_flag("--json", alc.json, "JSON output");

    VerifyArgs ver;
    CLI::App* verify = app.add_subcommand("verify", "Run the built-in self checks");
    verify->add_option("--cases", ver.cases, "Randomized cases per variant");
    verify->add_option("--seed", ver.seed, "Seed for the randomized cases");
    verify->add_flag("--exhaustive-packing,!--no-exhaustive-packing", ver.exhaustive_packing,
                     "Sweep all 2^24 packed operand combinations (default on)");
    verify->add_flag("--json", ver.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (profile->parsed()) {
        return run_guarded([&] {
            if (profile_json)
                std::cout << convip::profile_json().dump(2) << '\n';
            else
                std::cout << convip::profile_text();
            return 0;
        });
    }
    if (simulate->parsed()) return run_guarded([&] { return cmd_simulate(sim); });
    if (allocate->parsed()) return run_guarded([&] { return cmd_allocate(alc); });
    if (verify->parsed()) return run_guarded([&] { return cmd_verify(ver); });
    return kExitUsage;
}
