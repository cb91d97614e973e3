#pragma once

// Bit-accurate, cycle-counted behavioral models of the four convolution
// engine variants.
//
//   Conv_1  logic only, no DSP          1 output/cycle
//   Conv_2  1 DSP, less logic           1 output/cycle
//   Conv_3  1 DSP, dual-packed operands 2 outputs/cycle, 8-bit operands max
//   Conv_4  2 DSPs                      2 outputs/cycle
//
// All variants share the serial-coefficient / parallel-data loading
// discipline: k^2 coefficients first, one per cycle, then one step per
// cycle with outputs_per_cycle windows in parallel. Results appear after
// a fixed pipeline latency and must equal convolve_golden exactly.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "convip/errors.hpp"
#include "convip/golden.hpp"
#include "convip/image.hpp"
#include "convip/packing.hpp"

namespace convip {

enum class IpVariant { conv1, conv2, conv3, conv4 };

inline constexpr std::array<IpVariant, 4> kAllVariants = {
    IpVariant::conv1, IpVariant::conv2, IpVariant::conv3, IpVariant::conv4};

struct VariantTraits {
    const char* name;
    int outputs_per_cycle;
    int max_operand_bits;
};

inline const VariantTraits& traits(IpVariant v) {
    static constexpr std::array<VariantTraits, 4> table = {{
        {"Conv_1", 1, 16},
        {"Conv_2", 1, 16},
        {"Conv_3", 2, 8},
        {"Conv_4", 2, 16},
    }};
    return table[static_cast<std::size_t>(v)];
}

inline const char* variant_name(IpVariant v) { return traits(v).name; }

// Multiply, accumulate, emit: fixed three-stage pipeline, identical for
// every variant. Throughput differs, latency does not.
inline constexpr int kPipelineLatency = 3;

// Exact dot product of a coefficient vector against one data window,
// checked against the sufficient accumulator width.
inline std::int64_t mac_window(std::span<const std::int32_t> coeffs,
                               std::span<const std::int32_t> window, int acc_bits) {
    if (coeffs.size() != window.size())
        throw dimension_error("mac_window: coefficient/window length mismatch");
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        acc += static_cast<std::int64_t>(coeffs[i]) * window[i];
        if (!fits_signed(acc, acc_bits))
            throw overflow_error("mac accumulator overflow at tap " + std::to_string(i));
    }
    return acc;
}

// The clocked state of one engine instance. Value semantics: copy it to
// snapshot, run distinct engines on distinct threads freely.
class Engine {
public:
    using Window = std::vector<std::int32_t>;

    explicit Engine(IpVariant variant, int kernel_side = 3, int operand_bits = 8)
        : variant_(variant), k_(kernel_side), operand_bits_(operand_bits) {
        if (kernel_side <= 0)
            throw dimension_error("kernel side must be positive");
        if (operand_bits < 2 || operand_bits > traits(variant).max_operand_bits)
            throw width_error(std::string(variant_name(variant)) + " supports operands of 2.." +
                              std::to_string(traits(variant).max_operand_bits) + " bits, requested " +
                              std::to_string(operand_bits));
        coeffs_.resize(static_cast<std::size_t>(k_) * k_);
        acc_bits_ = accumulator_bits(operand_bits_, operand_bits_, k_);
    }

    IpVariant variant() const { return variant_; }
    int kernel_side() const { return k_; }
    int operand_bits() const { return operand_bits_; }
    int acc_bits() const { return acc_bits_; }
    int outputs_per_cycle() const { return traits(variant_).outputs_per_cycle; }
    std::int64_t cycle() const { return cycle_; }
    int load_count() const { return load_count_; }
    bool load_complete() const { return load_count_ == k_ * k_; }
    std::int32_t coefficient(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    std::uint64_t wide_multiplies() const { return wide_multiplies_; }

    // Serial coefficient load, row-major top-left first, one per cycle.
    void load_coefficient(std::int32_t c) {
        if (load_complete())
            throw phase_error("all " + std::to_string(k_ * k_) + " coefficients already loaded");
        if (!fits_signed(c, operand_bits_))
            throw width_error("coefficient " + std::to_string(c) + " exceeds " +
                              std::to_string(operand_bits_) + " signed bits");
        coeffs_[static_cast<std::size_t>(load_count_)] = c;
        ++load_count_;
        ++cycle_;
    }

    // One compute cycle: exactly outputs_per_cycle windows in parallel.
    // Returns results whose pipeline latency elapsed, in issue order.
    std::vector<std::int64_t> step(std::span<const Window> windows) {
        if (!load_complete())
            throw phase_error("engine stepped with only " + std::to_string(load_count_) + "/" +
                              std::to_string(k_ * k_) + " coefficients loaded");
        if (static_cast<int>(windows.size()) != outputs_per_cycle())
            throw arity_error(std::string(variant_name(variant_)) + " takes " +
                              std::to_string(outputs_per_cycle()) + " windows per cycle, got " +
                              std::to_string(windows.size()));
        for (const Window& w : windows) {
            if (w.size() != coeffs_.size())
                throw dimension_error("window has " + std::to_string(w.size()) + " taps, expected " +
                                      std::to_string(coeffs_.size()));
            for (std::int32_t x : w)
                if (!fits_signed(x, operand_bits_))
                    throw width_error("data value " + std::to_string(x) + " exceeds " +
                                      std::to_string(operand_bits_) + " signed bits");
        }

        Stage stage;
        stage.remaining = kPipelineLatency;
        switch (variant_) {
            case IpVariant::conv1:
            case IpVariant::conv2:
                stage.results = {mac_window(coeffs_, windows[0], acc_bits_)};
                break;
            case IpVariant::conv3:
                stage.results = dual_packed_mac(windows[0], windows[1]);
                break;
            case IpVariant::conv4:
                stage.results = {mac_window(coeffs_, windows[0], acc_bits_),
                                 mac_window(coeffs_, windows[1], acc_bits_)};
                break;
        }
        pipeline_.push_back(std::move(stage));
        return advance();
    }

    std::vector<std::int64_t> step(const Window& w) {
        return step(std::span<const Window>(&w, 1));
    }

    std::vector<std::int64_t> step(const Window& a, const Window& b) {
        const std::array<Window, 2> pair = {a, b};
        return step(std::span<const Window>(pair.data(), pair.size()));
    }

    // Idle cycle: nothing issued, in-flight results keep moving. Used to
    // drain the pipeline after the last window.
    std::vector<std::int64_t> drain_cycle() {
        if (!load_complete())
            throw phase_error("cannot drain before the coefficient load completes");
        return advance();
    }

    bool pipeline_empty() const { return pipeline_.empty(); }

    // Back to the unloaded state; the only way to replace coefficients.
    // Instrumentation counters survive a reset.
    void reset() {
        std::fill(coeffs_.begin(), coeffs_.end(), 0);
        load_count_ = 0;
        cycle_ = 0;
        pipeline_.clear();
    }

private:
    struct Stage {
        std::vector<std::int64_t> results;
        int remaining = 0;
    };

    // Conv_3 datapath: one packed multiply per tap serves both windows.
    // Products are extracted and sign-corrected every tap and gathered
    // in two separate full-width accumulators; accumulating inside the
    // packed word would let 20-bit sums corrupt the 18-bit field.
    std::vector<std::int64_t> dual_packed_mac(const Window& wa, const Window& wb) {
        std::int64_t acc_a = 0;
        std::int64_t acc_b = 0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            DualProduct p = packed_dual_multiply(wa[i], wb[i], coeffs_[i], &wide_multiplies_);
            acc_a += p.pa;
            acc_b += p.pb;
            if (!fits_signed(acc_a, acc_bits_) || !fits_signed(acc_b, acc_bits_))
                throw overflow_error("dual-mac accumulator overflow at tap " + std::to_string(i));
        }
        return {acc_a, acc_b};
    }

    std::vector<std::int64_t> advance() {
        ++cycle_;
        for (Stage& s : pipeline_) --s.remaining;
        std::vector<std::int64_t> emitted;
        while (!pipeline_.empty() && pipeline_.front().remaining <= 0) {
            for (std::int64_t r : pipeline_.front().results) emitted.push_back(r);
            pipeline_.pop_front();
        }
        return emitted;
    }

    IpVariant variant_;
    int k_;
    int operand_bits_;
    int acc_bits_;
    std::vector<std::int32_t> coeffs_;
    int load_count_ = 0;
    std::int64_t cycle_ = 0;
    std::deque<Stage> pipeline_;
    std::uint64_t wide_multiplies_ = 0;
};

struct RunResult {
    std::vector<AccPlane> planes;        // one per input image
    std::int64_t cycles = 0;             // k^2 load + ceil(windows / rate) + drain
    int steady_outputs_per_cycle = 0;    // emission rate once the pipeline is full
    std::uint64_t wide_multiplies = 0;   // Conv_3 instrumentation, 0 elsewhere
};

namespace detail {

struct StreamSlot {
    std::size_t plane;
    std::size_t index;
    bool valid;  // padding slots on the last odd cycle are discarded
};

}  // namespace detail

// Feed a whole layer through one engine instance: serial coefficient
// load, streamed windows, pipeline drain. Conv_1/Conv_2 take one image;
// Conv_3/Conv_4 take two images of identical shape (independent paired
// streams) or a single image whose window stream is split in half.
inline RunResult run_layer(IpVariant variant, std::span<const ImagePlane> images, const Kernel& ker,
                           int operand_bits = 0) {
    const int rate = traits(variant).outputs_per_cycle;
    if (images.empty() || static_cast<int>(images.size()) > (rate == 2 ? 2 : 1))
        throw arity_error(std::string(variant_name(variant)) + " takes " +
                          (rate == 2 ? "1 or 2 images" : "exactly 1 image") + ", got " +
                          std::to_string(images.size()));
    if (images.size() == 2 &&
        (images[0].width != images[1].width || images[0].height != images[1].height))
        throw dimension_error("paired streams must have identical dimensions");

    int data_bits = ker.bit_width;
    for (const ImagePlane& img : images) data_bits = std::max(data_bits, img.bit_width);
    if (operand_bits == 0) operand_bits = data_bits;
    if (data_bits > operand_bits)
        throw width_error("inputs use " + std::to_string(data_bits) + "-bit raws but the run is declared " +
                          std::to_string(operand_bits) + "-bit");

    Engine engine(variant, ker.side, operand_bits);
    for (std::int32_t c : ker.coeffs) engine.load_coefficient(c);

    // Window streams, one per engine slot. A lone image on a dual-rate
    // engine is split: first half of the raster order on slot A, second
    // half on slot B.
    std::vector<std::vector<Engine::Window>> streams;
    RunResult result;
    for (const ImagePlane& img : images) {
        AccPlane plane;
        plane.width = img.width - ker.side + 1;
        plane.height = img.height - ker.side + 1;
        plane.acc_bits = accumulator_bits(img.bit_width, ker.bit_width, ker.side);
        plane.values.resize(static_cast<std::size_t>(plane.width) * plane.height);
        result.planes.push_back(std::move(plane));
    }
    std::vector<std::vector<detail::StreamSlot>> slots(static_cast<std::size_t>(rate));
    if (static_cast<int>(images.size()) == rate) {
        for (std::size_t s = 0; s < images.size(); ++s) {
            streams.push_back(extract_windows(images[s], ker.side));
            slots[s].reserve(streams[s].size());
            for (std::size_t i = 0; i < streams[s].size(); ++i)
                slots[s].push_back({s, i, true});
        }
    } else {
        auto windows = extract_windows(images[0], ker.side);
        const std::size_t half = (windows.size() + 1) / 2;
        streams.resize(static_cast<std::size_t>(rate));
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const std::size_t s = i < half ? 0 : 1;
            slots[s].push_back({0, i, true});
            streams[s].push_back(std::move(windows[i]));
        }
    }

    std::size_t steps = 0;
    for (const auto& s : streams) steps = std::max(steps, s.size());

    const Engine::Window zero_window(static_cast<std::size_t>(ker.side) * ker.side, 0);
    std::deque<detail::StreamSlot> in_flight;
    std::vector<std::int64_t> emitted_per_step;
    emitted_per_step.reserve(steps);

    auto route = [&](const std::vector<std::int64_t>& emitted) {
        for (std::int64_t v : emitted) {
            detail::StreamSlot slot = in_flight.front();
            in_flight.pop_front();
            if (!slot.valid) continue;
            auto& plane = result.planes[slot.plane];
            if (!fits_signed(v, plane.acc_bits))
                throw overflow_error("emitted accumulator exceeded its sufficient width");
            plane.values[slot.index] = v;
        }
    };

    for (std::size_t t = 0; t < steps; ++t) {
        std::vector<Engine::Window> windows;
        windows.reserve(static_cast<std::size_t>(rate));
        for (int s = 0; s < rate; ++s) {
            if (t < streams[static_cast<std::size_t>(s)].size()) {
                windows.push_back(streams[static_cast<std::size_t>(s)][t]);
                in_flight.push_back(slots[static_cast<std::size_t>(s)][t]);
            } else {
                windows.push_back(zero_window);
                in_flight.push_back({0, 0, false});
            }
        }
        auto emitted = engine.step(windows);
        emitted_per_step.push_back(static_cast<std::int64_t>(emitted.size()));
        route(emitted);
    }
    for (int d = 0; d < kPipelineLatency; ++d) route(engine.drain_cycle());
    if (!engine.pipeline_empty() || !in_flight.empty())
        throw overflow_error("pipeline failed to drain");  // unreachable by construction

    result.cycles = engine.cycle();
    result.wide_multiplies = engine.wide_multiplies();

    // Steady state: every compute cycle from pipeline-full onward must
    // emit exactly the rated outputs.
    bool steady = steps >= static_cast<std::size_t>(kPipelineLatency);
    for (std::size_t t = static_cast<std::size_t>(kPipelineLatency) - 1; steady && t < steps; ++t)
        steady = emitted_per_step[t] == rate;
    result.steady_outputs_per_cycle = steady ? rate : 0;

    return result;
}

inline RunResult run_layer(IpVariant variant, const ImagePlane& img, const Kernel& ker,
                           int operand_bits = 0) {
    return run_layer(variant, std::span<const ImagePlane>(&img, 1), ker, operand_bits);
}

inline RunResult run_layer(IpVariant variant, const ImagePlane& a, const ImagePlane& b,
                           const Kernel& ker, int operand_bits = 0) {
    const std::array<ImagePlane, 2> pair = {a, b};
    return run_layer(variant, std::span<const ImagePlane>(pair.data(), pair.size()), ker, operand_bits);
}

}  // namespace convip
