#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rvdc/common.hpp"
#include "rvdc/control.hpp"
#include "rvdc/isa.hpp"

namespace rvdc {

inline constexpr std::size_t kDefaultDmemWords = 64;

// Architectural state: PC, the 32x32 register file and a word-addressed
// data memory. Register x0 reads as zero no matter what is written.
struct MachineState {
    std::uint32_t pc = 0;
    std::array<std::uint32_t, 32> regs{};
    std::vector<std::uint32_t> dmem = std::vector<std::uint32_t>(kDefaultDmemWords, 0);

    friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct AluResult {
    std::uint32_t out = 0;
    bool zero = false;  // set only by SUB when SrcA == SrcB
};

// Modeled unit delays. The critical path of an instruction is the sum of
// the units it traverses; LW traverses all three.
struct DelayModel {
    Duration regfile_read = Duration::ns(6);
    Duration alu = Duration::ns(6);
    Duration dmem_read = Duration::ns(4);
};

struct RegWriteEffect {
    std::uint32_t index = 0;
    std::uint32_t value = 0;
    friend bool operator==(const RegWriteEffect&, const RegWriteEffect&) = default;
};

struct MemWriteEffect {
    std::uint32_t addr = 0;  // byte address, word aligned
    std::uint32_t value = 0;
    friend bool operator==(const MemWriteEffect&, const MemWriteEffect&) = default;
};

// Effects committed by one cycle: at most one register write and one
// memory write.
struct StepEffects {
    std::uint32_t next_pc = 0;
    std::optional<RegWriteEffect> reg_write;
    std::optional<MemWriteEffect> mem_write;
    bool zero_flag = false;
    std::optional<std::uint32_t> loaded_value;

    friend bool operator==(const StepEffects&, const StepEffects&) = default;
};

// Register file ports follow the hardware naming: A1/A2 read addresses,
// A3/WD3/WE3 the write port.
std::pair<std::uint32_t, std::uint32_t> regfile_read(const MachineState& state,
                                                     std::uint32_t a1, std::uint32_t a2);
void regfile_write(MachineState& state, std::uint32_t a3, std::uint32_t wd3, bool we3);

// Total over all 8 ALU codes. ADD/SUB wrap modulo 2^32, SLT is an unsigned
// compare producing 0/1, shifts consume only SrcB[4:0].
AluResult alu_exec(std::uint32_t src_a, std::uint32_t src_b, AluOp control);

// Word-aligned access; reads the addressed word and optionally stores
// write_value when mem_write is set. Throws UnalignedAccess / OutOfBounds.
std::uint32_t dmem_access(MachineState& state, std::uint32_t addr,
                          std::optional<std::uint32_t> write_value, bool mem_write);

// One single-cycle execute step. Does not mutate state; commit() applies
// the returned effects. Throws InvalidJumpTarget for targets misaligned for
// the layout mode and propagates data-memory errors.
StepEffects step(const MachineState& state, const Instruction& instr,
                 const ControlSignals& signals, LayoutMode mode);

void commit(MachineState& state, const StepEffects& effects);

// Critical-path delay of an instruction under the model.
Duration delay_of(const Instruction& instr, const DelayModel& model);
Duration delay_of(Mnemonic m, const DelayModel& model);

}  // namespace rvdc
