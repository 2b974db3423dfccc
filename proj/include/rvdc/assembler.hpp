#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rvdc/common.hpp"
#include "rvdc/isa.hpp"

namespace rvdc {

// Instruction image file formats. bintext is one 32-bit binary string per
// word per line ($readmemb-compatible), hextext 8 hex digits per line, bin
// raw little-endian bytes.
enum class ImageFormat : std::uint8_t { BinText, HexText, Bin };

ImageFormat image_format_from_string(const std::string& name);
std::string to_string(ImageFormat format);

struct Statement {
    enum class Kind : std::uint8_t { Instr, Word, Org, Align };

    Kind kind = Kind::Instr;
    int line = 0;
    Mnemonic mnemonic = Mnemonic::ADD;
    std::uint32_t rd = 0;
    std::uint32_t rs1 = 0;
    std::uint32_t rs2 = 0;
    std::int64_t value = 0;   // immediate operand or directive argument
    std::string target;       // label reference; empty when numeric
};

struct SourceProgram {
    std::vector<Statement> statements;
    // label -> statement index; an index one past the end marks a label
    // bound to the end of the program.
    std::map<std::string, std::size_t> labels;
};

struct Image {
    std::uint32_t base = 0;
    std::vector<std::uint8_t> bytes;  // little-endian
    std::map<std::string, std::uint32_t> symbols;
    LayoutMode mode = LayoutMode::Packed;

    std::uint32_t end() const { return base + static_cast<std::uint32_t>(bytes.size()); }
    bool contains(std::uint32_t addr, std::uint32_t len) const {
        return addr >= base && addr + len <= end() && addr + len >= addr;
    }
    std::uint16_t read_u16(std::uint32_t addr) const;
    std::uint32_t read_u32(std::uint32_t addr) const;
};

// Tokenizes assembler source. Statements keep their 1-based source line for
// diagnostics. Throws SyntaxError / DuplicateLabel.
SourceProgram parse(const std::string& source);

// Two passes: layout and symbol resolution, then encoding. Branch labels
// resolve PC-relative, jal labels to absolute byte addresses. Throws
// UndefinedLabel / ImmediateOutOfRange / MisalignedTarget.
Image assemble(const SourceProgram& prog, LayoutMode mode);
Image assemble_source(const std::string& source, LayoutMode mode);

void write_image(const Image& img, ImageFormat format, std::ostream& out);
void write_image_file(const Image& img, ImageFormat format, const std::string& path);

// Throws MalformedLine on bad input. The mode tag is taken from the
// argument; image files do not carry it.
Image load_image(std::istream& in, ImageFormat format, LayoutMode mode = LayoutMode::Packed);
Image load_image_file(const std::string& path, ImageFormat format,
                      LayoutMode mode = LayoutMode::Packed);

// Image -> assembler source. Words that do not decode are emitted as .word
// directives; re-assembling the result in the same mode reproduces the
// image bytes.
std::string disassemble_image(const Image& img, LayoutMode mode);

}  // namespace rvdc
