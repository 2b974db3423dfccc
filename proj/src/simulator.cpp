#include "rvdc/simulator.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "rvdc/errors.hpp"
#include "rvdc/vcd.hpp"

namespace rvdc {

using nlohmann::ordered_json;

std::string_view to_string(HaltReason reason) {
    switch (reason) {
        case HaltReason::PcOutOfImage: return "pc-out-of-image";
        case HaltReason::MaxSteps: return "max-steps";
        case HaltReason::IllegalInstruction: return "illegal-instruction";
        case HaltReason::MemoryFault: return "memory-fault";
        default: return "jump-fault";
    }
}

std::optional<FetchResult> fetch(const Image& img, std::uint32_t pc, LayoutMode mode) {
    if (mode == LayoutMode::WordAligned) {
        if (pc % 4 != 0 || !img.contains(pc, 4)) return std::nullopt;
        const std::uint32_t word = img.read_u32(pc);
        if (is_compressed_word(word)) {
            // only the low halfword carries the instruction in this mode
            return FetchResult{word & 0xffff, true};
        }
        return FetchResult{word, false};
    }
    if (pc % 2 != 0 || !img.contains(pc, 2)) return std::nullopt;
    const std::uint16_t half = img.read_u16(pc);
    if (is_compressed_word(half)) return FetchResult{half, true};
    if (!img.contains(pc, 4)) return std::nullopt;  // truncated base instruction
    return FetchResult{img.read_u32(pc), false};
}

namespace {

void init_dmem(MachineState& state, const SimConfig& cfg) {
    state.dmem.assign(cfg.dmem_words, 0);
    if (!cfg.dmem_init) return;
    const auto& bytes = cfg.dmem_init->bytes;
    for (std::size_t off = 0; off + 3 < bytes.size(); off += 4) {
        const std::size_t index = off / 4;
        if (index >= state.dmem.size()) break;
        state.dmem[index] = static_cast<std::uint32_t>(bytes[off]) |
                            (static_cast<std::uint32_t>(bytes[off + 1]) << 8) |
                            (static_cast<std::uint32_t>(bytes[off + 2]) << 16) |
                            (static_cast<std::uint32_t>(bytes[off + 3]) << 24);
    }
}

}  // namespace

RunResult run(const Image& img, const SimConfig& cfg) {
    if (cfg.max_steps <= 0) throw Error("max_steps must be positive");

    RunResult result;
    result.state.pc = img.base;
    init_dmem(result.state, cfg);

    // reset preamble: idle derived periods at the reset shift value
    result.total_time =
        period_of(kResetShift, cfg.clock) * static_cast<std::int64_t>(cfg.reset_cycles);

    for (int step_index = 0;; ++step_index) {
        if (step_index >= cfg.max_steps) {
            result.halt = HaltReason::MaxSteps;
            result.halt_detail = "step limit of " + std::to_string(cfg.max_steps) + " reached";
            break;
        }
        const auto fetched = fetch(img, result.state.pc, cfg.mode);
        if (!fetched) {
            result.halt = HaltReason::PcOutOfImage;
            result.halt_detail = "pc " + std::to_string(result.state.pc) + " left the image";
            break;
        }

        const ShiftValue shift = phase_decode(fetched->raw);
        const Duration period = period_of(shift, cfg.clock);

        Instruction instr;
        try {
            instr = fetched->compressed ? decode16(static_cast<std::uint16_t>(fetched->raw))
                                        : decode32(fetched->raw);
        } catch (const IllegalInstruction& e) {
            if (!cfg.halt_on_illegal) throw;
            result.halt = HaltReason::IllegalInstruction;
            result.halt_detail = e.what();
            break;
        }

        const ControlSignals signals = control_signals(instr);
        StepEffects effects;
        try {
            effects = step(result.state, instr, signals, cfg.mode);
        } catch (const MemoryError& e) {
            result.halt = HaltReason::MemoryFault;
            result.halt_detail = e.what();
            break;
        } catch (const InvalidJumpTarget& e) {
            result.halt = HaltReason::JumpFault;
            result.halt_detail = e.what();
            break;
        }

        TraceRecord rec;
        rec.step = step_index;
        rec.pc = result.state.pc;
        rec.raw = fetched->raw;
        rec.mnemonic = std::string(to_string(instr.mnemonic));
        rec.compressed = instr.compressed;
        rec.shift = shift;
        rec.period = period;
        result.total_time += period;
        rec.cumulative_time = result.total_time;
        rec.delay = delay_of(instr, cfg.delays);
        rec.slack = period - rec.delay;
        rec.effects = effects;
        rec.zero = effects.zero_flag;
        result.trace.push_back(std::move(rec));

        commit(result.state, effects);
    }

    result.metrics = efficiency_report(result, cfg);
    return result;
}

Metrics efficiency_report(const RunResult& result, const SimConfig& cfg) {
    Metrics m;
    m.steps = static_cast<int>(result.trace.size());
    const Duration worst = max_period(cfg.clock);
    m.fixed_total = worst * m.steps;
    for (const auto& rec : result.trace) {
        m.dynamic_total += rec.period;
        m.busy += rec.delay;
    }
    if (m.fixed_total.as_ps() > 0) {
        m.improvement = static_cast<double>(m.fixed_total.as_ps() - m.dynamic_total.as_ps()) /
                        static_cast<double>(m.fixed_total.as_ps());
        m.utilization_fixed =
            static_cast<double>(m.busy.as_ps()) / static_cast<double>(m.fixed_total.as_ps());
    }
    if (m.dynamic_total.as_ps() > 0) {
        m.utilization_dynamic =
            static_cast<double>(m.busy.as_ps()) / static_cast<double>(m.dynamic_total.as_ps());
    }
    return m;
}

std::string efficiency_text(const Metrics& m) {
    std::ostringstream out;
    char pct[32];
    out << "instructions executed:  " << m.steps << '\n';
    out << "fixed-clock total:      " << m.fixed_total.ns_str() << "ns\n";
    out << "dynamic-clock total:    " << m.dynamic_total.ns_str() << "ns\n";
    std::snprintf(pct, sizeof pct, "%.2f%%", m.improvement * 100.0);
    out << "improvement:            " << pct << '\n';
    out << "busy time:              " << m.busy.ns_str() << "ns\n";
    std::snprintf(pct, sizeof pct, "%.2f%%", m.utilization_dynamic * 100.0);
    out << "utilization (dynamic):  " << pct << '\n';
    std::snprintf(pct, sizeof pct, "%.2f%%", m.utilization_fixed * 100.0);
    out << "utilization (fixed):    " << pct << '\n';
    return out.str();
}

std::string efficiency_json(const Metrics& m) {
    ordered_json doc;
    doc["steps"] = m.steps;
    doc["fixed_total_ns"] = m.fixed_total.as_ns();
    doc["dynamic_total_ns"] = m.dynamic_total.as_ns();
    doc["improvement"] = m.improvement;
    doc["busy_ns"] = m.busy.as_ns();
    doc["utilization_dynamic"] = m.utilization_dynamic;
    doc["utilization_fixed"] = m.utilization_fixed;
    return doc.dump(2);
}

void write_trace_jsonl(const RunResult& result, std::ostream& out) {
    for (const auto& rec : result.trace) {
        ordered_json doc;
        doc["step"] = rec.step;
        doc["pc"] = rec.pc;
        doc["raw"] = rec.raw;
        doc["mnemonic"] = rec.mnemonic;
        doc["compressed"] = rec.compressed;
        doc["shift"] = int(rec.shift);
        doc["period_ns"] = rec.period.as_ns();
        doc["cumulative_time_ns"] = rec.cumulative_time.as_ns();
        doc["delay_ns"] = rec.delay.as_ns();
        doc["slack_ns"] = rec.slack.as_ns();
        ordered_json effects;
        if (rec.effects.reg_write) {
            effects["reg_write"] = {{"index", rec.effects.reg_write->index},
                                    {"value", rec.effects.reg_write->value}};
        }
        if (rec.effects.mem_write) {
            effects["mem_write"] = {{"addr", rec.effects.mem_write->addr},
                                    {"value", rec.effects.mem_write->value}};
        }
        if (rec.effects.loaded_value) {
            effects["loaded_value"] = *rec.effects.loaded_value;
        }
        effects["next_pc"] = rec.effects.next_pc;
        doc["effects"] = std::move(effects);
        doc["zero"] = rec.zero;
        out << doc.dump() << '\n';
    }
}

void emit_vcd(const RunResult& result, const SimConfig& cfg, std::ostream& out) {
    VcdWriter vcd(out);
    const int master = vcd.add_wire("master_clk", 1);
    const int clk = vcd.add_wire("clk", 1);
    const int count = vcd.add_wire("count", 4);
    const int shift = vcd.add_wire("shift_value", 4);
    const int pc = vcd.add_wire("pc", 32);

    // timeline: reset preamble, executed instructions, then one idle tail
    // period so the final rising edge at the end of the run is visible.
    struct Segment {
        ShiftValue shift;
        std::uint32_t pc;
    };
    std::vector<Segment> segments;
    const std::uint32_t initial_pc = result.trace.empty() ? 0 : result.trace.front().pc;
    for (int i = 0; i < cfg.reset_cycles; ++i) segments.push_back({kResetShift, initial_pc});
    for (const auto& rec : result.trace) segments.push_back({rec.shift, rec.pc});

    vcd.write_header("dynclk");
    vcd.dump_initial(master, 1);
    vcd.dump_initial(clk, segments.empty() ? 0 : 1);
    vcd.dump_initial(count, 0);
    vcd.dump_initial(shift, segments.empty() ? 0 : segments.front().shift);
    vcd.dump_initial(pc, segments.empty() ? 0 : segments.front().pc);
    vcd.end_initial();
    if (segments.empty()) return;  // header-only dump

    const std::int64_t mp = cfg.clock.master_period.as_ps();
    const std::int64_t half = mp / 2;
    std::int64_t t = 0;
    const std::size_t total = segments.size() + 1;  // +1 idle tail period
    for (std::size_t s = 0; s < total; ++s) {
        const bool tail = s == segments.size();
        const ShiftValue sv = tail ? kResetShift : segments[s].shift;
        const std::uint32_t pc_val = tail ? result.state.pc : segments[s].pc;
        const int ticks = period_ticks(sv);
        vcd.at(t);
        vcd.change(shift, sv);
        vcd.change(pc, pc_val);
        for (int j = 0; j < ticks; ++j) {
            const std::int64_t tick_time = t + j * mp;
            vcd.at(tick_time);
            vcd.change(master, 1);
            vcd.change(count, static_cast<std::uint64_t>(j));
            vcd.change(clk, j < high_ticks(sv) ? 1 : 0);
            vcd.at(tick_time + half);
            vcd.change(master, 0);
        }
        t += static_cast<std::int64_t>(ticks) * mp;
    }
    vcd.finish(t);
}

std::string dump_state(const RunResult& result, const DumpSelectors& sel) {
    const MachineState& st = result.state;
    for (const auto& [begin, end] : sel.mem_ranges) {
        if (begin % 4 != 0 || end % 4 != 0) {
            throw BadSelector("memory range " + std::to_string(begin) + ":" +
                              std::to_string(end) + " not word aligned");
        }
        if (begin >= end || end / 4 > st.dmem.size()) {
            throw BadSelector("memory range " + std::to_string(begin) + ":" +
                              std::to_string(end) + " out of bounds");
        }
    }

    if (sel.json) {
        ordered_json doc;
        doc["pc"] = st.pc;
        doc["halt"] = std::string(to_string(result.halt));
        doc["total_time_ns"] = result.total_time.as_ns();
        if (sel.regs) {
            ordered_json regs = ordered_json::array();
            for (std::uint32_t i = 0; i < 32; ++i) {
                regs.push_back(regfile_read(st, i, 0).first);
            }
            doc["regs"] = std::move(regs);
        }
        if (!sel.mem_ranges.empty()) {
            ordered_json mem;
            for (const auto& [begin, end] : sel.mem_ranges) {
                for (std::uint32_t addr = begin; addr < end; addr += 4) {
                    mem[std::to_string(addr)] = st.dmem[addr / 4];
                }
            }
            doc["mem"] = std::move(mem);
        }
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    if (sel.regs) {
        for (std::uint32_t i = 0; i < 32; ++i) {
            out << 'x' << i << " = " << regfile_read(st, i, 0).first << '\n';
        }
    }
    for (const auto& [begin, end] : sel.mem_ranges) {
        for (std::uint32_t addr = begin; addr < end; addr += 4) {
            out << "mem[" << addr << "] = " << st.dmem[addr / 4] << '\n';
        }
    }
    return out.str();
}

}  // namespace rvdc
