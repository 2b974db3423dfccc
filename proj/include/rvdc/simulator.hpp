#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvdc/assembler.hpp"
#include "rvdc/clocking.hpp"
#include "rvdc/datapath.hpp"

namespace rvdc {

enum class HaltReason : std::uint8_t {
    PcOutOfImage,
    MaxSteps,
    IllegalInstruction,
    MemoryFault,
    JumpFault,
};

std::string_view to_string(HaltReason reason);

struct SimConfig {
    LayoutMode mode = LayoutMode::Packed;
    ClockConfig clock;
    DelayModel delays;
    int max_steps = 10000;
    int reset_cycles = 0;  // shift-6 idle periods prepended to the timeline
    std::size_t dmem_words = kDefaultDmemWords;
    bool halt_on_illegal = true;  // false: decode failures throw instead
    std::optional<Image> dmem_init;
};

struct TraceRecord {
    int step = 0;
    std::uint32_t pc = 0;
    std::uint32_t raw = 0;
    std::string mnemonic;
    bool compressed = false;
    ShiftValue shift = 0;
    Duration period;
    Duration cumulative_time;  // end of this step
    Duration delay;
    Duration slack;
    StepEffects effects;
    bool zero = false;
};

struct Metrics {
    int steps = 0;
    Duration busy;           // sum of modeled instruction delays
    Duration fixed_total;    // steps x worst-case period
    Duration dynamic_total;  // sum of per-instruction periods
    double improvement = 0.0;
    double utilization_dynamic = 0.0;
    double utilization_fixed = 0.0;
};

struct RunResult {
    MachineState state;
    std::vector<TraceRecord> trace;
    HaltReason halt = HaltReason::PcOutOfImage;
    std::string halt_detail;
    Duration total_time;  // includes the reset preamble
    Metrics metrics;
};

struct FetchResult {
    std::uint32_t raw = 0;
    bool compressed = false;
};

// Fetches the unit at pc for the layout mode; nullopt when pc leaves the
// image or a base instruction is truncated by the image end.
std::optional<FetchResult> fetch(const Image& img, std::uint32_t pc, LayoutMode mode);

// fetch -> phase decode -> execute -> clock advance until halt.
RunResult run(const Image& img, const SimConfig& cfg);

Metrics efficiency_report(const RunResult& result, const SimConfig& cfg);
std::string efficiency_text(const Metrics& m);
std::string efficiency_json(const Metrics& m);

// One JSON object per executed step.
void write_trace_jsonl(const RunResult& result, std::ostream& out);

// Master clock, derived clock, shifter counter, shift value and PC as a
// value change dump. Derived-clock rising edges land exactly on each trace
// record's cumulative time.
void emit_vcd(const RunResult& result, const SimConfig& cfg, std::ostream& out);

struct DumpSelectors {
    bool regs = false;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> mem_ranges;  // [begin, end) bytes
    bool json = false;
};

std::string dump_state(const RunResult& result, const DumpSelectors& sel);

}  // namespace rvdc
