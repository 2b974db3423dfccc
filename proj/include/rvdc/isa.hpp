#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rvdc/common.hpp"

namespace rvdc {

// The supported subset: 13 base (32-bit) instructions and 7 compressed
// (16-bit) ones. Compressed instructions are identified by raw[1:0] != 0b11.
enum class Mnemonic : std::uint8_t {
    ADD,
    SUB,
    AND,
    OR,
    XOR,
    SLT,
    SLL,
    SRL,
    ADDI,
    LW,
    SW,
    BEQ,
    JAL,
    C_AND,
    C_OR,
    C_XOR,
    C_SUB,
    C_LW,
    C_SW,
    C_JAL,
};

inline constexpr int kMnemonicCount = 20;

// Immediate layouts. I/S/B/CJ are sign-extended, Jabs and CLS zero-extended.
// B carries an implicit <<2, CLS <<2, CJ <<1; JAL immediates are absolute
// byte addresses, not PC-relative.
enum class ImmediateKind : std::uint8_t { None, I, S, B, Jabs, CLS, CJ };

namespace opcodes {
// base opcode[6:0]
inline constexpr std::uint32_t kRType = 0b0110011;
inline constexpr std::uint32_t kLoad = 0b0000011;
inline constexpr std::uint32_t kStore = 0b0100011;
inline constexpr std::uint32_t kBranch = 0b1100011;
inline constexpr std::uint32_t kJal = 0b1101111;
inline constexpr std::uint32_t kOpImm = 0b0010011;

// compressed op_c = {raw[15:13], raw[1:0]}
inline constexpr std::uint32_t kCArith = 0b10001;  // c.sub/c.xor/c.or/c.and
inline constexpr std::uint32_t kCLw = 0b01000;
inline constexpr std::uint32_t kCSw = 0b11000;
inline constexpr std::uint32_t kCJal = 0b00101;

// funct6 shared by the four compressed arithmetic instructions
inline constexpr std::uint32_t kCArithFunct6 = 0b100011;
}  // namespace opcodes

struct Instruction {
    Mnemonic mnemonic = Mnemonic::ADD;
    std::uint32_t opcode = 0;  // 7-bit, base instructions only
    std::uint32_t op_c = 0;    // 5-bit {raw[15:13], raw[1:0]}, compressed only
    std::uint32_t funct3 = 0;
    std::uint32_t funct7 = 0;  // base R-type only
    std::uint32_t funct2 = 0;  // compressed R-type only
    std::uint32_t rd = 0;
    std::uint32_t rs1 = 0;
    std::uint32_t rs2 = 0;
    std::int32_t imm = 0;  // fully extended and pre-shifted
    bool compressed = false;
    std::uint32_t raw = 0;  // original 16- or 32-bit word

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline bool is_compressed_word(std::uint32_t raw) { return (raw & 0b11) != 0b11; }

// Decoders reject anything outside the supported subset with
// IllegalInstruction, and words of the wrong width with WidthMismatch.
Instruction decode32(std::uint32_t word);
Instruction decode16(std::uint16_t half);

// Width-discriminating decode on raw[1:0].
Instruction decode(std::uint32_t raw);

// Inverse of decode; 16-bit encodings are returned zero-extended.
// Throws ImmediateOutOfRange / RegisterOutOfRange.
std::uint32_t encode(const Instruction& instr);

// Builds a normalized Instruction (funct/opcode fields and raw filled in)
// from operands. rs1 is ignored for compressed arithmetic (rd doubles as
// rs1) and rd is forced to x1 for c.jal.
Instruction make_instruction(Mnemonic m, std::uint32_t rd, std::uint32_t rs1,
                             std::uint32_t rs2, std::int32_t imm);

// One line of assembler dialect, e.g. "lw x5, 0(x0)". Branch offsets are
// printed PC-relative, jal targets as absolute addresses.
std::string disassemble(const Instruction& instr);

std::string_view to_string(Mnemonic m);
std::string to_upper_string(Mnemonic m);
ImmediateKind imm_kind(Mnemonic m);
bool is_base(Mnemonic m);

// c.and -> and, c.lw -> lw, ... ; identity for base mnemonics.
Mnemonic base_analog(Mnemonic m);

}  // namespace rvdc
