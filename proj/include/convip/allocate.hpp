#pragma once

// Resource-driven engine selection: choose instance counts of
// Conv_1..Conv_4 that maximize convolutions per cycle inside a resource
// budget. The problem is a four-variable bounded multi-dimensional
// knapsack, solved exactly by branch-and-bound; allocate_bruteforce is
// the plain-enumeration oracle the tests hold it against.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convip/errors.hpp"
#include "convip/resources.hpp"

namespace convip {

// What the fabric is being sized for: the operand width every selected
// engine must support, and optionally a cap on how many parallel streams
// are useful (engines past the cap add area but no value).
struct Workload {
    int operand_bits = 8;
    std::optional<std::int64_t> streams_wanted;

    void validate() const {
        if (operand_bits < 1 || operand_bits > 16)
            throw width_error("workload operand width must be in [1,16]");
        if (streams_wanted && *streams_wanted < 0)
            throw range_error("streams_wanted must be non-negative");
    }
};

struct Allocation {
    VariantCounts counts{};
    std::int64_t throughput = 0;  // sum of count * outputs_per_cycle
    ResourceVector used{};
};

namespace alloc_detail {

inline bool eligible(IpVariant v, const Workload& wl) {
    return profile_of(v).max_operand_bits >= wl.operand_bits;
}

inline std::int64_t capped(std::int64_t throughput, const Workload& wl) {
    return wl.streams_wanted ? std::min(throughput, *wl.streams_wanted) : throughput;
}

// Largest count of `v` alone that fits in `residual`.
inline std::int64_t max_count(IpVariant v, const ResourceVector& residual) {
    const ResourceVector& unit = profile_of(v).resources;
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    if (unit.luts > 0) m = std::min(m, residual.luts / unit.luts);
    if (unit.regs > 0) m = std::min(m, residual.regs / unit.regs);
    if (unit.clbs > 0) m = std::min(m, residual.clbs / unit.clbs);
    if (unit.dsps > 0) m = std::min(m, residual.dsps / unit.dsps);
    return std::max<std::int64_t>(m, 0);
}

// Deterministic preference order: throughput first, then fewest DSPs,
// fewest LUTs, lexicographically smallest counts in Conv_1..Conv_4
// order. Total over distinct count vectors.
inline bool better(const Allocation& a, const Allocation& b, const Workload& wl) {
    const std::int64_t ta = capped(a.throughput, wl);
    const std::int64_t tb = capped(b.throughput, wl);
    if (ta != tb) return ta > tb;
    if (a.used.dsps != b.used.dsps) return a.used.dsps < b.used.dsps;
    if (a.used.luts != b.used.luts) return a.used.luts < b.used.luts;
    return a.counts < b.counts;
}

// Upper bound on the throughput still reachable from `residual` using
// variants[idx..]: per resource dimension, an LP-style relaxation on the
// best throughput-per-unit ratio, plus the standalone ceiling of
// variants that do not consume that dimension at all. The minimum over
// dimensions bounds the integer optimum.
inline std::int64_t remaining_bound(std::size_t idx, const ResourceVector& residual,
                                    const Workload& wl) {
    const std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;
    std::int64_t best_dim = kUnbounded;
    const std::int64_t res[4] = {residual.luts, residual.regs, residual.clbs, residual.dsps};
    for (int d = 0; d < 4; ++d) {
        std::int64_t bound = 0;
        std::int64_t best_num = 0, best_den = 1;  // max opc/unit over users of dim d
        for (std::size_t j = idx; j < kAllVariants.size(); ++j) {
            IpVariant v = kAllVariants[j];
            if (!eligible(v, wl)) continue;
            const IpProfile& p = profile_of(v);
            const std::int64_t units[4] = {p.resources.luts, p.resources.regs, p.resources.clbs,
                                           p.resources.dsps};
            if (units[d] == 0) {
                bound += p.outputs_per_cycle * max_count(v, residual);
            } else if (p.outputs_per_cycle * best_den > best_num * units[d]) {
                best_num = p.outputs_per_cycle;
                best_den = units[d];
            }
        }
        if (best_num > 0) bound += res[d] * best_num / best_den + 1;
        best_dim = std::min(best_dim, bound);
    }
    return best_dim;
}

}  // namespace alloc_detail

// Exhaustive enumeration over all feasible count vectors. Oracle-grade:
// straight loops, no pruning beyond per-variant ceilings.
inline Allocation allocate_bruteforce(const Budget& budget, const Workload& wl) {
    wl.validate();
    if (!budget.ceiling.non_negative())
        throw range_error("budget must be non-negative");

    std::int64_t ceil[4];
    double space = 1.0;
    for (std::size_t i = 0; i < 4; ++i) {
        IpVariant v = kAllVariants[i];
        ceil[i] = alloc_detail::eligible(v, wl) ? alloc_detail::max_count(v, budget.ceiling) : 0;
        space *= static_cast<double>(ceil[i] + 1);
    }
    if (space > 1e7)
        throw search_error("brute-force search space " + std::to_string(space) + " exceeds 1e7");

    Allocation best;  // empty allocation is always feasible
    for (std::int64_t c1 = 0; c1 <= ceil[0]; ++c1)
        for (std::int64_t c2 = 0; c2 <= ceil[1]; ++c2)
            for (std::int64_t c3 = 0; c3 <= ceil[2]; ++c3)
                for (std::int64_t c4 = 0; c4 <= ceil[3]; ++c4) {
                    VariantCounts counts = {c1, c2, c3, c4};
                    ResourceVector used = aggregate(counts);
                    if (!used.fits_within(budget.ceiling)) continue;
                    std::int64_t tput = 0;
                    for (IpVariant v : kAllVariants)
                        tput += count_of(counts, v) * profile_of(v).outputs_per_cycle;
                    Allocation cand{counts, tput, used};
                    // same preference order as allocate(), evaluated
                    // independently by construction of the comparator
                    if (alloc_detail::better(cand, best, wl)) best = cand;
                }
    return best;
}

// Exact branch-and-bound. Counts are explored in descending order per
// variant so a high-throughput incumbent appears on the first dive;
// subtrees are cut only when their bound is strictly below the incumbent
// (equal-bound subtrees may still win on tie-breaks).
inline Allocation allocate(const Budget& budget, const Workload& wl) {
    wl.validate();
    if (!budget.ceiling.non_negative())
        throw range_error("budget must be non-negative");

    Allocation best;
    VariantCounts counts{};

    // Recursive lambda over variant index 0..3.
    auto search = [&](auto&& self, std::size_t idx, const ResourceVector& residual,
                      std::int64_t tput, const ResourceVector& used) -> void {
        if (idx == kAllVariants.size()) {
            Allocation cand{counts, tput, used};
            if (alloc_detail::better(cand, best, wl)) best = cand;
            return;
        }
        IpVariant v = kAllVariants[idx];
        const IpProfile& prof = profile_of(v);
        const std::int64_t top =
            alloc_detail::eligible(v, wl) ? alloc_detail::max_count(v, residual) : 0;
        for (std::int64_t n = top; n >= 0; --n) {
            ResourceVector cost{n * prof.resources.luts, n * prof.resources.regs,
                                n * prof.resources.clbs, n * prof.resources.dsps};
            ResourceVector next_residual = residual - cost;
            std::int64_t next_tput = tput + n * prof.outputs_per_cycle;
            std::int64_t bound = alloc_detail::capped(
                next_tput + alloc_detail::remaining_bound(idx + 1, next_residual, wl), wl);
            if (bound < alloc_detail::capped(best.throughput, wl)) continue;
            counts[idx] = n;
            self(self, idx + 1, next_residual, next_tput, used + cost);
            counts[idx] = 0;
        }
    };
    search(search, 0, budget.ceiling, 0, ResourceVector{});
    return best;
}

// Human-readable account of what an allocation used and what bound it.
struct AllocationReport {
    Allocation allocation;
    ResourceVector budget{};
    ResourceVector residual{};
    std::int64_t effective_throughput = 0;         // after the streams cap, if any
    std::vector<std::string> binding;              // dimensions with zero residual
    std::vector<std::string> binding_trivial;      // of those, dimensions budgeted at zero
};

inline AllocationReport explain(const Allocation& a, const Budget& budget,
                                const Workload& wl = {}) {
    AllocationReport rep;
    rep.allocation = a;
    rep.budget = budget.ceiling;
    rep.residual = budget.ceiling - a.used;
    rep.effective_throughput = alloc_detail::capped(a.throughput, wl);
    const std::pair<const char*, std::int64_t> dims[4] = {{"luts", rep.residual.luts},
                                                          {"regs", rep.residual.regs},
                                                          {"clbs", rep.residual.clbs},
                                                          {"dsps", rep.residual.dsps}};
    const std::int64_t budgets[4] = {budget.ceiling.luts, budget.ceiling.regs,
                                     budget.ceiling.clbs, budget.ceiling.dsps};
    for (int d = 0; d < 4; ++d) {
        if (dims[d].second == 0) {
            rep.binding.push_back(dims[d].first);
            if (budgets[d] == 0) rep.binding_trivial.push_back(dims[d].first);
        }
    }
    return rep;
}

}  // namespace convip
