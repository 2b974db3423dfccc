#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvdc/common.hpp"
#include "rvdc/datapath.hpp"
#include "rvdc/isa.hpp"

namespace rvdc {

// Master clock source feeding the phase shifter. 500MHz (2ns) by default.
struct ClockConfig {
    Duration master_period = Duration::ns(2);

    static ClockConfig from_mhz(double mhz);
    double mhz() const;
};

// 4-bit shift value chosen per opcode; the derived clock period spans
// shift+1 master periods. The decoder emits 2, 6 or 8.
using ShiftValue = std::uint8_t;

inline constexpr ShiftValue kResetShift = 6;
inline constexpr ShiftValue kMinShift = 2;  // below this the output never goes high

// Counter state of the phase shifter. clk_level == (count < shift>>1).
struct ShifterState {
    std::uint8_t count = 0;
    bool clk_level = true;
};

// Opcode -> shift value. Total: unknown opcodes fall back to 6, rst forces
// 6 regardless of the word. Accepts a 32-bit word or a zero-extended
// 16-bit halfword; width is discriminated on raw[1:0].
ShiftValue phase_decode(std::uint32_t raw, bool rst = false);

// Derived clock period: (shift + 1) master periods. Throws DegenerateShift
// for shift < 2.
Duration period_of(ShiftValue shift, const ClockConfig& cfg);

int high_ticks(ShiftValue shift);    // master ticks with the derived clock high
int low_ticks(ShiftValue shift);
int period_ticks(ShiftValue shift);  // shift + 1

// Advances one master-clock rising edge: count increments up to shift then
// wraps to 0; the level is recomputed from the new count.
ShifterState shifter_tick(const ShifterState& state, ShiftValue shift);
ShifterState shifter_reset();

struct TimingRow {
    Mnemonic mnemonic;
    Duration delay;
    ShiftValue shift;
    Duration period;
    Duration slack;  // period - delay; must stay positive
};

struct TimingReport {
    std::vector<TimingRow> rows;
    Duration min_slack;
    bool ok = false;

    std::string text() const;
    std::string json() const;
};

// Per-instruction safety check: the derived period allocated by the phase
// decoder must exceed the modeled critical-path delay.
TimingReport check_timing(const DelayModel& delays, const ClockConfig& cfg);

// Largest derived period over the supported set (the fixed-clock baseline).
Duration max_period(const ClockConfig& cfg);

}  // namespace rvdc
