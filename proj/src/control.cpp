#include "rvdc/control.hpp"

namespace rvdc {

ControlSignals control_signals(const Instruction& instr) {
    ControlSignals s;
    s.comp = !instr.compressed;
    s.alu_control = alu_control(instr);

    switch (base_analog(instr.mnemonic)) {
        case Mnemonic::ADD:
        case Mnemonic::SUB:
        case Mnemonic::AND:
        case Mnemonic::OR:
        case Mnemonic::XOR:
        case Mnemonic::SLT:
        case Mnemonic::SLL:
        case Mnemonic::SRL:
            s.reg_write = true;
            break;
        case Mnemonic::ADDI:
            s.imm_c = true;
            s.reg_write = true;
            s.alu_src = true;
            break;
        case Mnemonic::LW:
            // mem_to_reg = 1 so the loaded word, not the address, reaches rd
            s.imm_c = true;
            s.reg_write = true;
            s.alu_src = true;
            s.mem_to_reg = true;
            break;
        case Mnemonic::SW:
            s.alu_src = true;
            s.mem_write = true;
            break;
        case Mnemonic::BEQ:
            s.branch = true;
            break;
        case Mnemonic::JAL:
            s.reg_write = true;
            s.jump = true;
            break;
        default:
            break;
    }
    return s;
}

AluOp alu_control(const Instruction& instr) {
    switch (instr.mnemonic) {
        case Mnemonic::ADD: return AluOp::ADD;
        case Mnemonic::SUB: return AluOp::SUB;
        case Mnemonic::AND: return AluOp::AND;
        case Mnemonic::OR: return AluOp::OR;
        case Mnemonic::XOR: return AluOp::XOR;
        case Mnemonic::SLT: return AluOp::SLT;
        case Mnemonic::SLL: return AluOp::SLL;
        case Mnemonic::SRL: return AluOp::SRL;
        case Mnemonic::C_AND: return AluOp::AND;
        case Mnemonic::C_OR: return AluOp::OR;
        case Mnemonic::C_XOR: return AluOp::XOR;
        case Mnemonic::C_SUB: return AluOp::SUB;
        case Mnemonic::BEQ: return AluOp::SUB;  // zero flag drives the branch
        case Mnemonic::ADDI:
        case Mnemonic::LW:
        case Mnemonic::SW:
        case Mnemonic::C_LW:
        case Mnemonic::C_SW:
            return AluOp::ADD;  // address / immediate arithmetic
        case Mnemonic::JAL:
        case Mnemonic::C_JAL:
        default:
            return AluOp::ADD;  // result unused
    }
}

}  // namespace rvdc
