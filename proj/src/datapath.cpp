#include "rvdc/datapath.hpp"

#include <string>

#include "rvdc/errors.hpp"

namespace rvdc {

std::pair<std::uint32_t, std::uint32_t> regfile_read(const MachineState& state,
                                                     std::uint32_t a1, std::uint32_t a2) {
    const std::uint32_t rd1 = a1 != 0 ? state.regs[a1] : 0;
    const std::uint32_t rd2 = a2 != 0 ? state.regs[a2] : 0;
    return {rd1, rd2};
}

void regfile_write(MachineState& state, std::uint32_t a3, std::uint32_t wd3, bool we3) {
    if (we3 && a3 != 0) state.regs[a3] = wd3;
}

AluResult alu_exec(std::uint32_t src_a, std::uint32_t src_b, AluOp control) {
    AluResult r;
    switch (control) {
        case AluOp::AND: r.out = src_a & src_b; break;
        case AluOp::OR: r.out = src_a | src_b; break;
        case AluOp::XOR: r.out = src_a ^ src_b; break;
        case AluOp::ADD: r.out = src_a + src_b; break;
        case AluOp::SUB:
            r.out = src_a - src_b;
            r.zero = src_a == src_b;
            break;
        case AluOp::SLT: r.out = src_a < src_b ? 1 : 0; break;
        case AluOp::SLL: r.out = src_a << (src_b & 0x1f); break;
        case AluOp::SRL: r.out = src_a >> (src_b & 0x1f); break;
    }
    return r;
}

namespace {

std::uint32_t dmem_word_index(const MachineState& state, std::uint32_t addr) {
    if (addr % 4 != 0) {
        throw UnalignedAccess("data address " + std::to_string(addr) + " not word aligned");
    }
    const std::uint32_t index = addr / 4;
    if (index >= state.dmem.size()) {
        throw OutOfBounds("data address " + std::to_string(addr) + " beyond " +
                          std::to_string(state.dmem.size()) + " words");
    }
    return index;
}

}  // namespace

std::uint32_t dmem_access(MachineState& state, std::uint32_t addr,
                          std::optional<std::uint32_t> write_value, bool mem_write) {
    const std::uint32_t index = dmem_word_index(state, addr);
    const std::uint32_t read = state.dmem[index];
    if (mem_write) state.dmem[index] = write_value.value_or(0);
    return read;
}

namespace {

std::uint32_t sequential_pc(std::uint32_t pc, bool compressed, LayoutMode mode) {
    return pc + ((mode == LayoutMode::Packed && compressed) ? 2 : 4);
}

void check_jump_alignment(std::uint32_t target, LayoutMode mode) {
    const std::uint32_t granule = mode == LayoutMode::WordAligned ? 4 : 2;
    if (target % granule != 0) {
        throw InvalidJumpTarget("jump target " + std::to_string(target) +
                                " misaligned for " + to_string(mode) + " layout");
    }
}

}  // namespace

StepEffects step(const MachineState& state, const Instruction& instr,
                 const ControlSignals& signals, LayoutMode mode) {
    StepEffects fx;

    const auto [rd1, rd2] = regfile_read(state, instr.rs1, instr.rs2);
    const std::uint32_t src_b =
        signals.alu_src ? static_cast<std::uint32_t>(instr.imm) : rd2;
    const AluResult alu = alu_exec(rd1, src_b, signals.alu_control);
    fx.zero_flag = alu.zero;

    const std::uint32_t seq = sequential_pc(state.pc, instr.compressed, mode);
    fx.next_pc = seq;
    if (signals.jump) {
        // jal targets are absolute addresses, c.jal is PC-relative
        const std::uint32_t target = instr.mnemonic == Mnemonic::JAL
                                         ? static_cast<std::uint32_t>(instr.imm)
                                         : state.pc + static_cast<std::uint32_t>(instr.imm);
        check_jump_alignment(target, mode);
        fx.next_pc = target;
    } else if (signals.branch && alu.zero) {
        fx.next_pc = state.pc + static_cast<std::uint32_t>(instr.imm);
    }

    if (signals.mem_write) {
        // validate the store address now; the write itself lands at commit
        dmem_word_index(state, alu.out);
        fx.mem_write = MemWriteEffect{alu.out, rd2};
    } else if (signals.mem_to_reg && signals.reg_write && !signals.jump) {
        fx.loaded_value = state.dmem[dmem_word_index(state, alu.out)];
    }

    if (signals.reg_write) {
        std::uint32_t value = alu.out;
        if (signals.jump) {
            value = seq;  // link value: address of the next sequential instruction
        } else if (fx.loaded_value) {
            value = *fx.loaded_value;
        }
        fx.reg_write = RegWriteEffect{instr.rd, value};
    }
    return fx;
}

void commit(MachineState& state, const StepEffects& effects) {
    if (effects.reg_write) {
        regfile_write(state, effects.reg_write->index, effects.reg_write->value, true);
    }
    if (effects.mem_write) {
        dmem_access(state, effects.mem_write->addr, effects.mem_write->value, true);
    }
    state.pc = effects.next_pc;
}

Duration delay_of(Mnemonic m, const DelayModel& model) {
    switch (m) {
        case Mnemonic::JAL:
        case Mnemonic::C_JAL:
            return Duration::ps(0);  // traverses none of the modeled units
        case Mnemonic::LW:
        case Mnemonic::C_LW:
            return model.regfile_read + model.alu + model.dmem_read;
        default:
            return model.regfile_read + model.alu;
    }
}

Duration delay_of(const Instruction& instr, const DelayModel& model) {
    return delay_of(instr.mnemonic, model);
}

}  // namespace rvdc
