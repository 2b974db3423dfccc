#pragma once

#include <stdexcept>
#include <string>

namespace rvdc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- decoding / encoding ---

struct DecodeError : Error {
    using Error::Error;
};

struct IllegalInstruction : DecodeError {
    using DecodeError::DecodeError;
};

// Raised when a word is handed to the wrong-width decoder. A width mismatch
// is also an illegal instruction for that decoder, hence the inheritance.
struct WidthMismatch : IllegalInstruction {
    using IllegalInstruction::IllegalInstruction;
};

struct EncodeError : Error {
    using Error::Error;
};

struct ImmediateOutOfRange : EncodeError {
    using EncodeError::EncodeError;
};

struct RegisterOutOfRange : EncodeError {
    using EncodeError::EncodeError;
};

// --- datapath ---

struct MemoryError : Error {
    using Error::Error;
};

struct UnalignedAccess : MemoryError {
    using MemoryError::MemoryError;
};

struct OutOfBounds : MemoryError {
    using MemoryError::MemoryError;
};

struct InvalidJumpTarget : Error {
    using Error::Error;
};

// --- clocking ---

struct DegenerateShift : Error {
    using Error::Error;
};

// --- assembler / image files ---

struct AsmError : Error {
    AsmError(const std::string& message, int line)
        : Error("line " + std::to_string(line) + ": " + message), line(line) {}
    int line;
};

struct SyntaxError : AsmError {
    using AsmError::AsmError;
};

struct DuplicateLabel : AsmError {
    using AsmError::AsmError;
};

struct UndefinedLabel : AsmError {
    using AsmError::AsmError;
};

struct MisalignedTarget : AsmError {
    using AsmError::AsmError;
};

struct MalformedLine : AsmError {
    using AsmError::AsmError;
};

// --- state dumps ---

struct BadSelector : Error {
    using Error::Error;
};

}  // namespace rvdc
