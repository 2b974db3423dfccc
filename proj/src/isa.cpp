#include "rvdc/isa.hpp"

#include <array>
#include <cctype>
#include <sstream>

#include "rvdc/errors.hpp"

namespace rvdc {

namespace {

struct MnemonicInfo {
    std::string_view name;
    bool compressed;
    ImmediateKind imm;
    std::uint32_t opcode;  // base opcode, or op_c for compressed
    std::uint32_t funct3;
    std::uint32_t funct7;  // base R-type funct7, or compressed funct2
};

// Indexed by Mnemonic.
constexpr std::array<MnemonicInfo, kMnemonicCount> kInfo{{
    {"add", false, ImmediateKind::None, opcodes::kRType, 0b000, 0b0000000},
    {"sub", false, ImmediateKind::None, opcodes::kRType, 0b000, 0b0100000},
    {"and", false, ImmediateKind::None, opcodes::kRType, 0b111, 0b0000000},
    {"or", false, ImmediateKind::None, opcodes::kRType, 0b110, 0b0000000},
    {"xor", false, ImmediateKind::None, opcodes::kRType, 0b100, 0b0000000},
    {"slt", false, ImmediateKind::None, opcodes::kRType, 0b010, 0b0000000},
    {"sll", false, ImmediateKind::None, opcodes::kRType, 0b001, 0b0000000},
    {"srl", false, ImmediateKind::None, opcodes::kRType, 0b101, 0b0000000},
    {"addi", false, ImmediateKind::I, opcodes::kOpImm, 0b000, 0},
    {"lw", false, ImmediateKind::I, opcodes::kLoad, 0b010, 0},
    {"sw", false, ImmediateKind::S, opcodes::kStore, 0b010, 0},
    {"beq", false, ImmediateKind::B, opcodes::kBranch, 0b000, 0},
    {"jal", false, ImmediateKind::Jabs, opcodes::kJal, 0, 0},
    {"c.and", true, ImmediateKind::None, opcodes::kCArith, 0b100, 0b11},
    {"c.or", true, ImmediateKind::None, opcodes::kCArith, 0b100, 0b10},
    {"c.xor", true, ImmediateKind::None, opcodes::kCArith, 0b100, 0b01},
    {"c.sub", true, ImmediateKind::None, opcodes::kCArith, 0b100, 0b00},
    {"c.lw", true, ImmediateKind::CLS, opcodes::kCLw, 0b010, 0},
    {"c.sw", true, ImmediateKind::CLS, opcodes::kCSw, 0b110, 0},
    {"c.jal", true, ImmediateKind::CJ, opcodes::kCJal, 0b001, 0},
}};

const MnemonicInfo& info(Mnemonic m) { return kInfo[static_cast<std::size_t>(m)]; }

std::uint32_t bits(std::uint32_t word, int hi, int lo) {
    return (word >> lo) & ((1u << (hi - lo + 1)) - 1);
}

void check_reg(std::uint32_t index, std::uint32_t limit, const char* field) {
    if (index > limit) {
        throw RegisterOutOfRange(std::string(field) + " = x" + std::to_string(index) +
                                 " exceeds x" + std::to_string(limit));
    }
}

void check_imm(std::int64_t value, std::int64_t lo, std::int64_t hi, int multiple_of,
               Mnemonic m) {
    if (value < lo || value > hi) {
        throw ImmediateOutOfRange("immediate " + std::to_string(value) + " for " +
                                  std::string(to_string(m)) + " outside [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (multiple_of > 1 && value % multiple_of != 0) {
        throw ImmediateOutOfRange("immediate " + std::to_string(value) + " for " +
                                  std::string(to_string(m)) + " not a multiple of " +
                                  std::to_string(multiple_of));
    }
}

std::string reg_name(std::uint32_t index) { return "x" + std::to_string(index); }

}  // namespace

Instruction decode32(std::uint32_t word) {
    if (is_compressed_word(word)) {
        throw WidthMismatch("word has compressed width marker (bits[1:0] != 11)");
    }

    Instruction ins;
    ins.raw = word;
    ins.compressed = false;
    ins.opcode = bits(word, 6, 0);
    ins.rd = bits(word, 11, 7);
    ins.funct3 = bits(word, 14, 12);
    ins.rs1 = bits(word, 19, 15);
    ins.rs2 = bits(word, 24, 20);
    ins.funct7 = bits(word, 31, 25);

    switch (ins.opcode) {
        case opcodes::kRType: {
            if (ins.funct7 != 0b0000000 && ins.funct7 != 0b0100000) {
                throw IllegalInstruction("unsupported funct7 in R-type word");
            }
            // only SUB carries funct7 0100000
            if (ins.funct7 == 0b0100000 && ins.funct3 != 0b000) {
                throw IllegalInstruction("funct7 0100000 with funct3 != 000");
            }
            switch (ins.funct3) {
                case 0b000: ins.mnemonic = ins.funct7 ? Mnemonic::SUB : Mnemonic::ADD; break;
                case 0b001: ins.mnemonic = Mnemonic::SLL; break;
                case 0b010: ins.mnemonic = Mnemonic::SLT; break;
                case 0b100: ins.mnemonic = Mnemonic::XOR; break;
                case 0b101: ins.mnemonic = Mnemonic::SRL; break;
                case 0b110: ins.mnemonic = Mnemonic::OR; break;
                case 0b111: ins.mnemonic = Mnemonic::AND; break;
                default: throw IllegalInstruction("unsupported R-type funct3");
            }
            break;
        }
        case opcodes::kOpImm:
            if (ins.funct3 != 0b000) throw IllegalInstruction("unsupported OP-IMM funct3");
            ins.mnemonic = Mnemonic::ADDI;
            ins.imm = sign_extend(bits(word, 31, 20), 12);
            ins.rs2 = 0;
            ins.funct7 = 0;
            break;
        case opcodes::kLoad:
            if (ins.funct3 != 0b010) throw IllegalInstruction("unsupported LOAD funct3");
            ins.mnemonic = Mnemonic::LW;
            ins.imm = sign_extend(bits(word, 31, 20), 12);
            ins.rs2 = 0;
            ins.funct7 = 0;
            break;
        case opcodes::kStore:
            if (ins.funct3 != 0b010) throw IllegalInstruction("unsupported STORE funct3");
            ins.mnemonic = Mnemonic::SW;
            ins.imm = sign_extend((bits(word, 31, 25) << 5) | bits(word, 11, 7), 12);
            ins.rd = 0;
            ins.funct7 = 0;
            break;
        case opcodes::kBranch:
            if (ins.funct3 != 0b000) throw IllegalInstruction("unsupported BRANCH funct3");
            ins.mnemonic = Mnemonic::BEQ;
            // S-layout bits with an implied <<2
            ins.imm = sign_extend((bits(word, 31, 25) << 5) | bits(word, 11, 7), 12) * 4;
            ins.rd = 0;
            ins.funct7 = 0;
            break;
        case opcodes::kJal:
            // bits[19:12] are dead in this format; require zero so that
            // re-encoding a decoded instruction reproduces raw exactly.
            if (bits(word, 19, 12) != 0) {
                throw IllegalInstruction("nonzero unused bits in JAL word");
            }
            ins.mnemonic = Mnemonic::JAL;
            // zero-extended absolute byte address
            ins.imm = static_cast<std::int32_t>(bits(word, 31, 20));
            ins.rs1 = ins.rs2 = 0;
            ins.funct3 = 0;
            ins.funct7 = 0;
            break;
        default:
            throw IllegalInstruction("unsupported opcode");
    }
    return ins;
}

Instruction decode16(std::uint16_t half) {
    const std::uint32_t word = half;
    if (!is_compressed_word(word)) {
        throw WidthMismatch("halfword has base width marker (bits[1:0] == 11)");
    }

    Instruction ins;
    ins.raw = word;
    ins.compressed = true;
    ins.funct3 = bits(word, 15, 13);
    ins.op_c = (ins.funct3 << 2) | bits(word, 1, 0);

    switch (ins.op_c) {
        case opcodes::kCArith: {
            if (bits(word, 15, 10) != opcodes::kCArithFunct6) {
                throw IllegalInstruction("unsupported compressed funct6");
            }
            ins.rd = ins.rs1 = bits(word, 9, 7);
            ins.funct2 = bits(word, 6, 5);
            ins.rs2 = bits(word, 4, 2);
            switch (ins.funct2) {
                case 0b00: ins.mnemonic = Mnemonic::C_SUB; break;
                case 0b01: ins.mnemonic = Mnemonic::C_XOR; break;
                case 0b10: ins.mnemonic = Mnemonic::C_OR; break;
                default: ins.mnemonic = Mnemonic::C_AND; break;
            }
            break;
        }
        case opcodes::kCLw:
            ins.mnemonic = Mnemonic::C_LW;
            ins.rs1 = bits(word, 9, 7);
            ins.rd = bits(word, 4, 2);
            // zero-extended bits[12:10]||bits[6:5], scaled by 4
            ins.imm = static_cast<std::int32_t>(((bits(word, 12, 10) << 2) | bits(word, 6, 5)) << 2);
            break;
        case opcodes::kCSw:
            ins.mnemonic = Mnemonic::C_SW;
            ins.rs1 = bits(word, 9, 7);
            ins.rs2 = bits(word, 4, 2);
            ins.imm = static_cast<std::int32_t>(((bits(word, 12, 10) << 2) | bits(word, 6, 5)) << 2);
            break;
        case opcodes::kCJal:
            ins.mnemonic = Mnemonic::C_JAL;
            // sign-extended bits[12:2], scaled by 2; link register fixed to x1
            ins.imm = sign_extend(bits(word, 12, 2), 11) * 2;
            ins.rd = 1;
            break;
        default:
            throw IllegalInstruction("unsupported compressed op_c");
    }
    return ins;
}

Instruction decode(std::uint32_t raw) {
    return is_compressed_word(raw) ? decode16(static_cast<std::uint16_t>(raw)) : decode32(raw);
}

std::uint32_t encode(const Instruction& instr) {
    const MnemonicInfo& mi = info(instr.mnemonic);
    const std::int64_t imm = instr.imm;

    if (!mi.compressed) {
        check_reg(instr.rd, 31, "rd");
        check_reg(instr.rs1, 31, "rs1");
        check_reg(instr.rs2, 31, "rs2");
        switch (imm_kind(instr.mnemonic)) {
            case ImmediateKind::None:
                return (mi.funct7 << 25) | (instr.rs2 << 20) | (instr.rs1 << 15) |
                       (mi.funct3 << 12) | (instr.rd << 7) | mi.opcode;
            case ImmediateKind::I:
                check_imm(imm, -2048, 2047, 1, instr.mnemonic);
                return (static_cast<std::uint32_t>(imm & 0xfff) << 20) | (instr.rs1 << 15) |
                       (mi.funct3 << 12) | (instr.rd << 7) | mi.opcode;
            case ImmediateKind::S: {
                check_imm(imm, -2048, 2047, 1, instr.mnemonic);
                const std::uint32_t v = static_cast<std::uint32_t>(imm & 0xfff);
                return ((v >> 5) << 25) | (instr.rs2 << 20) | (instr.rs1 << 15) |
                       (mi.funct3 << 12) | ((v & 0x1f) << 7) | mi.opcode;
            }
            case ImmediateKind::B: {
                check_imm(imm, -8192, 8188, 4, instr.mnemonic);
                const std::uint32_t v = static_cast<std::uint32_t>((imm / 4) & 0xfff);
                return ((v >> 5) << 25) | (instr.rs2 << 20) | (instr.rs1 << 15) |
                       (mi.funct3 << 12) | ((v & 0x1f) << 7) | mi.opcode;
            }
            case ImmediateKind::Jabs:
                check_imm(imm, 0, 4095, 1, instr.mnemonic);
                return (static_cast<std::uint32_t>(imm) << 20) | (instr.rd << 7) | mi.opcode;
            default:
                break;
        }
        throw EncodeError("unhandled base format");
    }

    switch (imm_kind(instr.mnemonic)) {
        case ImmediateKind::None:  // c.sub/c.xor/c.or/c.and
            check_reg(instr.rd, 7, "rd");
            check_reg(instr.rs2, 7, "rs2");
            return (opcodes::kCArithFunct6 << 10) | (instr.rd << 7) | (mi.funct7 << 5) |
                   (instr.rs2 << 2) | 0b01;
        case ImmediateKind::CLS: {
            check_reg(instr.rs1, 7, "rs1");
            check_reg(instr.mnemonic == Mnemonic::C_LW ? instr.rd : instr.rs2, 7,
                      instr.mnemonic == Mnemonic::C_LW ? "rd" : "rs2");
            check_imm(imm, 0, 124, 4, instr.mnemonic);
            const std::uint32_t field = static_cast<std::uint32_t>(imm / 4);
            const std::uint32_t data_reg =
                instr.mnemonic == Mnemonic::C_LW ? instr.rd : instr.rs2;
            return (mi.funct3 << 13) | ((field >> 2) << 10) | (instr.rs1 << 7) |
                   ((field & 0b11) << 5) | (data_reg << 2) | 0b00;
        }
        case ImmediateKind::CJ: {
            check_imm(imm, -2048, 2046, 2, instr.mnemonic);
            const std::uint32_t field = static_cast<std::uint32_t>((imm / 2) & 0x7ff);
            return (mi.funct3 << 13) | (field << 2) | 0b01;
        }
        default:
            break;
    }
    throw EncodeError("unhandled compressed format");
}

Instruction make_instruction(Mnemonic m, std::uint32_t rd, std::uint32_t rs1,
                             std::uint32_t rs2, std::int32_t imm) {
    const MnemonicInfo& mi = info(m);
    Instruction ins;
    ins.mnemonic = m;
    ins.compressed = mi.compressed;
    ins.funct3 = mi.funct3;
    ins.imm = imm;
    if (mi.compressed) {
        ins.op_c = mi.opcode;
        ins.funct2 = mi.funct7;
        switch (m) {
            case Mnemonic::C_LW: ins.rd = rd; ins.rs1 = rs1; break;
            case Mnemonic::C_SW: ins.rs1 = rs1; ins.rs2 = rs2; break;
            case Mnemonic::C_JAL: ins.rd = 1; break;
            default:  // compressed arithmetic: rd doubles as rs1
                ins.rd = ins.rs1 = rd;
                ins.rs2 = rs2;
                break;
        }
    } else {
        ins.opcode = mi.opcode;
        switch (imm_kind(m)) {
            case ImmediateKind::None:
                ins.funct7 = mi.funct7;
                ins.rd = rd; ins.rs1 = rs1; ins.rs2 = rs2;
                break;
            case ImmediateKind::I: ins.rd = rd; ins.rs1 = rs1; break;
            case ImmediateKind::S:
            case ImmediateKind::B: ins.rs1 = rs1; ins.rs2 = rs2; break;
            case ImmediateKind::Jabs: ins.rd = rd; ins.funct3 = 0; break;
            default: break;
        }
    }
    ins.raw = encode(ins);
    return ins;
}

std::string disassemble(const Instruction& instr) {
    std::ostringstream out;
    out << to_string(instr.mnemonic) << ' ';
    switch (imm_kind(instr.mnemonic)) {
        case ImmediateKind::None:
            if (instr.compressed) {
                out << reg_name(instr.rd) << ", " << reg_name(instr.rs2);
            } else {
                out << reg_name(instr.rd) << ", " << reg_name(instr.rs1) << ", "
                    << reg_name(instr.rs2);
            }
            break;
        case ImmediateKind::I:
            if (instr.mnemonic == Mnemonic::LW) {
                out << reg_name(instr.rd) << ", " << instr.imm << '(' << reg_name(instr.rs1)
                    << ')';
            } else {
                out << reg_name(instr.rd) << ", " << reg_name(instr.rs1) << ", " << instr.imm;
            }
            break;
        case ImmediateKind::S:
            out << reg_name(instr.rs2) << ", " << instr.imm << '(' << reg_name(instr.rs1)
                << ')';
            break;
        case ImmediateKind::B:
            out << reg_name(instr.rs1) << ", " << reg_name(instr.rs2) << ", " << instr.imm;
            break;
        case ImmediateKind::Jabs:
            out << reg_name(instr.rd) << ", " << instr.imm;
            break;
        case ImmediateKind::CLS: {
            const std::uint32_t data_reg =
                instr.mnemonic == Mnemonic::C_LW ? instr.rd : instr.rs2;
            out << reg_name(data_reg) << ", " << instr.imm << '(' << reg_name(instr.rs1)
                << ')';
            break;
        }
        case ImmediateKind::CJ:
            out << instr.imm;
            break;
    }
    return out.str();
}

std::string_view to_string(Mnemonic m) { return info(m).name; }

std::string to_upper_string(Mnemonic m) {
    std::string name(info(m).name);
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

ImmediateKind imm_kind(Mnemonic m) { return info(m).imm; }

bool is_base(Mnemonic m) { return !info(m).compressed; }

Mnemonic base_analog(Mnemonic m) {
    switch (m) {
        case Mnemonic::C_AND: return Mnemonic::AND;
        case Mnemonic::C_OR: return Mnemonic::OR;
        case Mnemonic::C_XOR: return Mnemonic::XOR;
        case Mnemonic::C_SUB: return Mnemonic::SUB;
        case Mnemonic::C_LW: return Mnemonic::LW;
        case Mnemonic::C_SW: return Mnemonic::SW;
        case Mnemonic::C_JAL: return Mnemonic::JAL;
        default: return m;
    }
}

}  // namespace rvdc
