#pragma once

#include <cstdint>

#include "rvdc/isa.hpp"

namespace rvdc {

// 3-bit ALU operation selectors.
enum class AluOp : std::uint8_t {
    AND = 0b000,
    OR = 0b001,
    XOR = 0b010,
    ADD = 0b011,
    SUB = 0b100,
    SLT = 0b101,
    SLL = 0b110,
    SRL = 0b111,
};

// Control vector produced by the decoder part of the control unit.
// Don't-care positions materialize as 0. The effective branch-taken signal
// is branch AND the ALU zero flag; jump overrides the writeback source.
struct ControlSignals {
    bool imm_c = false;       // immediate layout: 1 = I-format, 0 = S-format
    bool reg_write = false;   // WE3
    bool alu_src = false;     // 1 = SrcB is the immediate, 0 = RD2
    bool branch = false;
    bool mem_write = false;
    bool mem_to_reg = false;  // writeback from data memory
    bool jump = false;
    bool comp = false;        // 1 = base-width instruction
    AluOp alu_control = AluOp::ADD;

    friend bool operator==(const ControlSignals&, const ControlSignals&) = default;
};

// Control vector for a decoded instruction. Compressed instructions receive
// the vector of their base analog (with comp = 0).
ControlSignals control_signals(const Instruction& instr);

AluOp alu_control(const Instruction& instr);

}  // namespace rvdc
