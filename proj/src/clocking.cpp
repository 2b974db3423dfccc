#include "rvdc/clocking.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rvdc/errors.hpp"

namespace rvdc {

ClockConfig ClockConfig::from_mhz(double mhz) {
    if (!(mhz > 0.0)) throw Error("master clock frequency must be positive");
    ClockConfig cfg;
    cfg.master_period = Duration::ps(static_cast<std::int64_t>(std::llround(1e6 / mhz)));
    if (cfg.master_period.as_ps() <= 0) throw Error("master clock frequency too high");
    return cfg;
}

double ClockConfig::mhz() const { return 1e6 / static_cast<double>(master_period.as_ps()); }

ShiftValue phase_decode(std::uint32_t raw, bool rst) {
    if (rst) return kResetShift;
    if (!is_compressed_word(raw)) {
        switch (raw & 0x7f) {
            case opcodes::kRType: return 6;
            case opcodes::kStore: return 6;
            case opcodes::kLoad: return 8;
            case opcodes::kOpImm: return 6;
            case opcodes::kBranch: return 6;
            case opcodes::kJal: return 2;
            default: return 6;
        }
    }
    const std::uint32_t op_c = (((raw >> 13) & 0b111) << 2) | (raw & 0b11);
    switch (op_c) {
        case opcodes::kCArith: return 6;
        case opcodes::kCSw: return 6;
        case opcodes::kCLw: return 8;
        case opcodes::kCJal: return 2;
        default: return 6;
    }
}

Duration period_of(ShiftValue shift, const ClockConfig& cfg) {
    if (shift < kMinShift) {
        throw DegenerateShift("shift value " + std::to_string(shift) +
                              " leaves the derived clock permanently low");
    }
    return cfg.master_period * period_ticks(shift);
}

int high_ticks(ShiftValue shift) { return shift >> 1; }
int low_ticks(ShiftValue shift) { return period_ticks(shift) - high_ticks(shift); }
int period_ticks(ShiftValue shift) { return shift + 1; }

ShifterState shifter_tick(const ShifterState& state, ShiftValue shift) {
    ShifterState next;
    next.count = state.count < shift ? state.count + 1 : 0;
    next.clk_level = next.count < (shift >> 1);
    return next;
}

ShifterState shifter_reset() { return ShifterState{0, true}; }

namespace {

// One canonical instance per mnemonic, enough to drive the phase decoder.
std::uint32_t representative_word(Mnemonic m) {
    return make_instruction(m, 1, 1, 1, 0).raw;
}

}  // namespace

TimingReport check_timing(const DelayModel& delays, const ClockConfig& cfg) {
    TimingReport report;
    report.ok = true;
    bool first = true;
    for (int i = 0; i < kMnemonicCount; ++i) {
        const auto m = static_cast<Mnemonic>(i);
        TimingRow row;
        row.mnemonic = m;
        row.delay = delay_of(m, delays);
        row.shift = phase_decode(representative_word(m));
        row.period = period_of(row.shift, cfg);
        row.slack = row.period - row.delay;
        if (row.slack <= Duration::ps(0)) report.ok = false;
        if (first || row.slack < report.min_slack) {
            report.min_slack = row.slack;
            first = false;
        }
        report.rows.push_back(row);
    }
    return report;
}

Duration max_period(const ClockConfig& cfg) {
    Duration best = Duration::ps(0);
    for (int i = 0; i < kMnemonicCount; ++i) {
        const auto m = static_cast<Mnemonic>(i);
        const Duration p = period_of(phase_decode(representative_word(m)), cfg);
        if (p > best) best = p;
    }
    return best;
}

std::string TimingReport::text() const {
    std::ostringstream out;
    for (const auto& row : rows) {
        out << to_upper_string(row.mnemonic) << ": delay " << row.delay.ns_str()
            << "ns, shift " << int(row.shift) << ", period " << row.period.ns_str()
            << "ns, slack " << row.slack.ns_str() << "ns"
            << (row.slack <= Duration::ps(0) ? "  [VIOLATION]" : "") << '\n';
    }
    out << "minimum slack: " << min_slack.ns_str() << "ns ("
        << (ok ? "ok" : "TIMING VIOLATION") << ")\n";
    return out.str();
}

std::string TimingReport::json() const {
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["mnemonic"] = std::string(to_string(row.mnemonic));
        r["delay_ns"] = row.delay.as_ns();
        r["shift"] = int(row.shift);
        r["period_ns"] = row.period.as_ns();
        r["slack_ns"] = row.slack.as_ns();
        doc["rows"].push_back(std::move(r));
    }
    doc["min_slack_ns"] = min_slack.as_ns();
    doc["ok"] = ok;
    return doc.dump(2);
}

}  // namespace rvdc
