#include "rvdc/assembler.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "rvdc/errors.hpp"

namespace rvdc {

namespace {

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Cursor over one source line.
class LineScanner {
public:
    LineScanner(std::string text, int line) : text_(std::move(text)), line_(line) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) {
            throw SyntaxError(std::string("expected '") + c + "'", line_);
        }
    }

    // identifier or mnemonic: [A-Za-z_.$][A-Za-z0-9_.$]*
    std::optional<std::string> word() {
        skip_ws();
        std::size_t start = pos_;
        auto is_word_char = [](char c, bool first) {
            return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
                   c == '$' || (!first && std::isdigit(static_cast<unsigned char>(c)));
        };
        while (pos_ < text_.size() && is_word_char(text_[pos_], pos_ == start)) ++pos_;
        if (pos_ == start) return std::nullopt;
        return text_.substr(start, pos_ - start);
    }

    std::uint32_t reg() {
        skip_ws();
        if (pos_ >= text_.size() ||
            (std::tolower(static_cast<unsigned char>(text_[pos_])) != 'x' &&
             std::tolower(static_cast<unsigned char>(text_[pos_])) != 'r')) {
            throw SyntaxError("expected register operand", line_);
        }
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start) throw SyntaxError("expected register number", line_);
        const long index = std::stol(text_.substr(start, pos_ - start));
        if (index > 31) throw SyntaxError("register index out of range", line_);
        return static_cast<std::uint32_t>(index);
    }

    std::int64_t number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        int base = 10;
        if (pos_ + 1 < text_.size() && text_[pos_] == '0' &&
            (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
            base = 16;
            pos_ += 2;
        }
        std::size_t digits_start = pos_;
        auto is_digit = [&](char c) {
            return base == 16 ? std::isxdigit(static_cast<unsigned char>(c)) != 0
                              : std::isdigit(static_cast<unsigned char>(c)) != 0;
        };
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (pos_ == digits_start) throw SyntaxError("expected number", line_);
        try {
            return std::stoll(text_.substr(start, pos_ - start), nullptr, base == 16 ? 0 : 10);
        } catch (const std::exception&) {
            throw SyntaxError("number out of range", line_);
        }
    }

    bool peek_number() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        const char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+';
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    int line() const { return line_; }

private:
    std::string text_;
    std::size_t pos_ = 0;
    int line_;
};

std::optional<Mnemonic> mnemonic_from_string(const std::string& name) {
    for (int i = 0; i < kMnemonicCount; ++i) {
        const auto m = static_cast<Mnemonic>(i);
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

// target operand: label or numeric (relative offset for beq/c.jal,
// absolute address for jal)
void parse_target(LineScanner& sc, Statement& stmt) {
    if (sc.peek_number()) {
        stmt.value = sc.number();
    } else if (auto label = sc.word()) {
        stmt.target = *label;
    } else {
        throw SyntaxError("expected label or address", sc.line());
    }
}

void parse_mem_operand(LineScanner& sc, Statement& stmt, std::uint32_t& base_reg) {
    stmt.value = sc.number();
    sc.expect('(');
    base_reg = sc.reg();
    sc.expect(')');
}

Statement parse_instruction(LineScanner& sc, Mnemonic m) {
    Statement stmt;
    stmt.kind = Statement::Kind::Instr;
    stmt.line = sc.line();
    stmt.mnemonic = m;
    switch (imm_kind(m)) {
        case ImmediateKind::None:
            stmt.rd = sc.reg();
            sc.expect(',');
            if (is_base(m)) {
                stmt.rs1 = sc.reg();
                sc.expect(',');
                stmt.rs2 = sc.reg();
            } else {
                stmt.rs1 = stmt.rd;  // CA layout: rd doubles as rs1
                stmt.rs2 = sc.reg();
            }
            break;
        case ImmediateKind::I:
            stmt.rd = sc.reg();
            sc.expect(',');
            if (m == Mnemonic::LW) {
                parse_mem_operand(sc, stmt, stmt.rs1);
            } else {
                stmt.rs1 = sc.reg();
                sc.expect(',');
                stmt.value = sc.number();
            }
            break;
        case ImmediateKind::S:
            stmt.rs2 = sc.reg();
            sc.expect(',');
            parse_mem_operand(sc, stmt, stmt.rs1);
            break;
        case ImmediateKind::B:
            stmt.rs1 = sc.reg();
            sc.expect(',');
            stmt.rs2 = sc.reg();
            sc.expect(',');
            parse_target(sc, stmt);
            break;
        case ImmediateKind::Jabs:
            stmt.rd = sc.reg();
            sc.expect(',');
            parse_target(sc, stmt);
            break;
        case ImmediateKind::CLS:
            if (m == Mnemonic::C_LW) {
                stmt.rd = sc.reg();
            } else {
                stmt.rs2 = sc.reg();
            }
            sc.expect(',');
            parse_mem_operand(sc, stmt, stmt.rs1);
            break;
        case ImmediateKind::CJ:
            parse_target(sc, stmt);
            break;
    }
    return stmt;
}

std::string strip_comment(const std::string& line) {
    std::string out = line;
    if (auto pos = out.find('#'); pos != std::string::npos) out.resize(pos);
    if (auto pos = out.find("//"); pos != std::string::npos) out.resize(pos);
    return out;
}

std::uint32_t layout_granule(LayoutMode mode) {
    return mode == LayoutMode::WordAligned ? 4 : 2;
}

std::uint32_t instr_size(Mnemonic m, LayoutMode mode) {
    if (is_base(m)) return 4;
    return mode == LayoutMode::WordAligned ? 4 : 2;
}

void put_u16(std::vector<std::uint8_t>& bytes, std::uint32_t offset, std::uint16_t value) {
    bytes[offset] = static_cast<std::uint8_t>(value & 0xff);
    bytes[offset + 1] = static_cast<std::uint8_t>(value >> 8);
}

void put_u32(std::vector<std::uint8_t>& bytes, std::uint32_t offset, std::uint32_t value) {
    bytes[offset] = static_cast<std::uint8_t>(value & 0xff);
    bytes[offset + 1] = static_cast<std::uint8_t>((value >> 8) & 0xff);
    bytes[offset + 2] = static_cast<std::uint8_t>((value >> 16) & 0xff);
    bytes[offset + 3] = static_cast<std::uint8_t>((value >> 24) & 0xff);
}

}  // namespace

std::uint16_t Image::read_u16(std::uint32_t addr) const {
    const std::uint32_t off = addr - base;
    return static_cast<std::uint16_t>(bytes[off] | (bytes[off + 1] << 8));
}

std::uint32_t Image::read_u32(std::uint32_t addr) const {
    const std::uint32_t off = addr - base;
    return static_cast<std::uint32_t>(bytes[off]) | (static_cast<std::uint32_t>(bytes[off + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes[off + 2]) << 16) |
           (static_cast<std::uint32_t>(bytes[off + 3]) << 24);
}

SourceProgram parse(const std::string& source) {
    SourceProgram prog;
    std::istringstream in(source);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        LineScanner sc(strip_comment(raw_line), line_no);
        while (!sc.at_end()) {
            auto token = sc.word();
            if (!token) {
                throw SyntaxError("unexpected character", line_no);
            }
            if (sc.consume(':')) {  // label definition
                if (prog.labels.count(*token)) {
                    throw DuplicateLabel("label '" + *token + "' already defined", line_no);
                }
                prog.labels[*token] = prog.statements.size();
                continue;
            }
            const std::string lowered = to_lower(*token);
            if (lowered == ".word") {
                Statement stmt;
                stmt.kind = Statement::Kind::Word;
                stmt.line = line_no;
                stmt.value = sc.number();
                if (stmt.value < INT64_C(-2147483648) || stmt.value > INT64_C(4294967295)) {
                    throw SyntaxError(".word value out of 32-bit range", line_no);
                }
                prog.statements.push_back(stmt);
            } else if (lowered == ".org") {
                Statement stmt;
                stmt.kind = Statement::Kind::Org;
                stmt.line = line_no;
                stmt.value = sc.number();
                if (stmt.value < 0) throw SyntaxError(".org address negative", line_no);
                prog.statements.push_back(stmt);
            } else if (lowered == ".align") {
                Statement stmt;
                stmt.kind = Statement::Kind::Align;
                stmt.line = line_no;
                stmt.value = sc.number();
                if (stmt.value <= 0) throw SyntaxError(".align argument must be positive", line_no);
                prog.statements.push_back(stmt);
            } else if (auto m = mnemonic_from_string(lowered)) {
                prog.statements.push_back(parse_instruction(sc, *m));
            } else {
                throw SyntaxError("unknown mnemonic or directive '" + *token + "'", line_no);
            }
            if (!sc.at_end()) {
                throw SyntaxError("trailing characters after statement", line_no);
            }
        }
    }
    return prog;
}

Image assemble(const SourceProgram& prog, LayoutMode mode) {
    const std::uint32_t granule = layout_granule(mode);

    // pass 1: layout. addrs[i] is the location counter when statement i is
    // reached; labels bound to a statement resolve to it.
    std::vector<std::uint32_t> addrs(prog.statements.size(), 0);
    std::uint32_t lc = 0;
    for (std::size_t i = 0; i < prog.statements.size(); ++i) {
        const Statement& stmt = prog.statements[i];
        addrs[i] = lc;
        switch (stmt.kind) {
            case Statement::Kind::Org: {
                const auto target = static_cast<std::uint64_t>(stmt.value);
                if (target < lc) throw SyntaxError(".org moves backward", stmt.line);
                if (target % granule != 0) {
                    throw MisalignedTarget(".org address not aligned for " + to_string(mode) +
                                               " layout",
                                           stmt.line);
                }
                lc = static_cast<std::uint32_t>(target);
                break;
            }
            case Statement::Kind::Align: {
                const auto a = static_cast<std::uint32_t>(stmt.value);
                lc = (lc + a - 1) / a * a;
                break;
            }
            case Statement::Kind::Word:
                lc += 4;
                break;
            case Statement::Kind::Instr:
                if (lc % granule != 0) {
                    throw MisalignedTarget("instruction at misaligned address " +
                                               std::to_string(lc),
                                           stmt.line);
                }
                lc += instr_size(stmt.mnemonic, mode);
                break;
        }
    }

    Image img;
    img.mode = mode;
    img.bytes.assign(lc, 0);
    for (const auto& [label, index] : prog.labels) {
        img.symbols[label] = index < addrs.size() ? addrs[index] : lc;
    }

    // pass 2: encode
    for (std::size_t i = 0; i < prog.statements.size(); ++i) {
        const Statement& stmt = prog.statements[i];
        if (stmt.kind == Statement::Kind::Word) {
            put_u32(img.bytes, addrs[i], static_cast<std::uint32_t>(stmt.value));
            continue;
        }
        if (stmt.kind != Statement::Kind::Instr) continue;

        std::int64_t imm = stmt.value;
        const ImmediateKind kind = imm_kind(stmt.mnemonic);
        if (!stmt.target.empty()) {
            const auto it = img.symbols.find(stmt.target);
            if (it == img.symbols.end()) {
                throw UndefinedLabel("undefined label '" + stmt.target + "'", stmt.line);
            }
            if (kind == ImmediateKind::Jabs) {
                imm = it->second;
            } else {  // PC-relative: B or CJ
                imm = static_cast<std::int64_t>(it->second) -
                      static_cast<std::int64_t>(addrs[i]);
            }
        }
        if (kind == ImmediateKind::B && imm % 4 != 0) {
            throw MisalignedTarget("branch target offset " + std::to_string(imm) +
                                       " not a multiple of 4",
                                   stmt.line);
        }
        if (kind == ImmediateKind::CJ && imm % 2 != 0) {
            throw MisalignedTarget("jump target offset " + std::to_string(imm) +
                                       " not a multiple of 2",
                                   stmt.line);
        }
        if (kind == ImmediateKind::Jabs && imm % granule != 0) {
            throw MisalignedTarget("jump target " + std::to_string(imm) +
                                       " misaligned for " + to_string(mode) + " layout",
                                   stmt.line);
        }

        Instruction ins;
        try {
            ins = make_instruction(stmt.mnemonic, stmt.rd, stmt.rs1, stmt.rs2,
                                   static_cast<std::int32_t>(imm));
        } catch (const ImmediateOutOfRange& e) {
            throw ImmediateOutOfRange("line " + std::to_string(stmt.line) + ": " + e.what());
        } catch (const RegisterOutOfRange& e) {
            throw RegisterOutOfRange("line " + std::to_string(stmt.line) + ": " + e.what());
        }

        if (ins.compressed) {
            put_u16(img.bytes, addrs[i], static_cast<std::uint16_t>(ins.raw));
            // word-aligned mode: high halfword of the slot stays zero
        } else {
            put_u32(img.bytes, addrs[i], ins.raw);
        }
    }
    return img;
}

Image assemble_source(const std::string& source, LayoutMode mode) {
    return assemble(parse(source), mode);
}

ImageFormat image_format_from_string(const std::string& name) {
    if (name == "bintext") return ImageFormat::BinText;
    if (name == "hextext") return ImageFormat::HexText;
    if (name == "bin") return ImageFormat::Bin;
    throw Error("unknown image format '" + name + "' (expected bintext, hextext or bin)");
}

std::string to_string(ImageFormat format) {
    switch (format) {
        case ImageFormat::BinText: return "bintext";
        case ImageFormat::HexText: return "hextext";
        default: return "bin";
    }
}

void write_image(const Image& img, ImageFormat format, std::ostream& out) {
    if (format == ImageFormat::Bin) {
        out.write(reinterpret_cast<const char*>(img.bytes.data()),
                  static_cast<std::streamsize>(img.bytes.size()));
        return;
    }
    // text formats are word granular; a trailing halfword pads with zeros
    for (std::size_t off = 0; off < img.bytes.size(); off += 4) {
        std::uint32_t word = 0;
        for (std::size_t b = 0; b < 4 && off + b < img.bytes.size(); ++b) {
            word |= static_cast<std::uint32_t>(img.bytes[off + b]) << (8 * b);
        }
        if (format == ImageFormat::BinText) {
            char buf[33];
            for (int bit = 0; bit < 32; ++bit) {
                buf[bit] = (word >> (31 - bit)) & 1 ? '1' : '0';
            }
            buf[32] = '\0';
            out << buf << '\n';
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%08x", word);
            out << buf << '\n';
        }
    }
}

void write_image_file(const Image& img, ImageFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_image(img, format, out);
    if (!out) throw Error("write to '" + path + "' failed");
}

Image load_image(std::istream& in, ImageFormat format, LayoutMode mode) {
    Image img;
    img.mode = mode;
    if (format == ImageFormat::Bin) {
        char c;
        while (in.get(c)) img.bytes.push_back(static_cast<std::uint8_t>(c));
        if (img.bytes.size() % 2 != 0) {
            throw Error("bin image has odd byte count");
        }
        return img;
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = line;
        if (auto pos = text.find("//"); pos != std::string::npos) text.resize(pos);
        // trim
        std::size_t first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::size_t last = text.find_last_not_of(" \t\r");
        text = text.substr(first, last - first + 1);

        std::uint32_t word = 0;
        if (format == ImageFormat::BinText) {
            if (text.size() != 32) {
                throw MalformedLine("expected 32 binary digits, got " +
                                        std::to_string(text.size()),
                                    line_no);
            }
            for (char c : text) {
                if (c != '0' && c != '1') {
                    throw MalformedLine("non-binary digit in word", line_no);
                }
                word = (word << 1) | static_cast<std::uint32_t>(c - '0');
            }
        } else {
            if (text.size() != 8) {
                throw MalformedLine("expected 8 hex digits, got " + std::to_string(text.size()),
                                    line_no);
            }
            for (char c : text) {
                if (!std::isxdigit(static_cast<unsigned char>(c))) {
                    throw MalformedLine("non-hex digit in word", line_no);
                }
                word = (word << 4) | static_cast<std::uint32_t>(
                                         std::isdigit(static_cast<unsigned char>(c))
                                             ? c - '0'
                                             : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
            }
        }
        const std::size_t off = img.bytes.size();
        img.bytes.resize(off + 4);
        put_u32(img.bytes, static_cast<std::uint32_t>(off), word);
    }
    return img;
}

Image load_image_file(const std::string& path, ImageFormat format, LayoutMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_image(in, format, mode);
}

std::string disassemble_image(const Image& img, LayoutMode mode) {
    std::ostringstream out;
    char buf[32];
    std::uint32_t pc = img.base;
    while (pc < img.end()) {
        if (mode == LayoutMode::WordAligned) {
            const std::uint32_t word = img.read_u32(pc);
            try {
                out << disassemble(decode(word)) << '\n';
            } catch (const DecodeError&) {
                std::snprintf(buf, sizeof buf, ".word 0x%08x", word);
                out << buf << '\n';
            }
            pc += 4;
            continue;
        }
        const std::uint16_t half = img.read_u16(pc);
        if (!is_compressed_word(half)) {
            if (!img.contains(pc, 4)) {
                throw Error("truncated instruction at address " + std::to_string(pc));
            }
            const std::uint32_t word = img.read_u32(pc);
            try {
                out << disassemble(decode32(word)) << '\n';
            } catch (const DecodeError&) {
                std::snprintf(buf, sizeof buf, ".word 0x%08x", word);
                out << buf << '\n';
            }
            pc += 4;
            continue;
        }
        try {
            out << disassemble(decode16(half)) << '\n';
            pc += 2;
        } catch (const DecodeError&) {
            // undecodable halfword: fold it and its neighbor into a .word
            if (!img.contains(pc, 4)) {
                throw Error("undecodable trailing halfword at address " + std::to_string(pc));
            }
            std::snprintf(buf, sizeof buf, ".word 0x%08x", img.read_u32(pc));
            out << buf << '\n';
            pc += 4;
        }
    }
    return out.str();
}

}  // namespace rvdc
