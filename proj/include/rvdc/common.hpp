#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace rvdc {

// All timing arithmetic is done in integral picoseconds so that period and
// slack comparisons are exact. Durations constructed from fractional
// nanoseconds round to the nearest picosecond.
class Duration {
public:
    constexpr Duration() = default;

    static constexpr Duration ps(std::int64_t value) { return Duration(value); }
    static constexpr Duration ns(double value) {
        const double scaled = value * 1000.0;
        return Duration(static_cast<std::int64_t>(scaled + (scaled >= 0 ? 0.5 : -0.5)));
    }

    constexpr std::int64_t as_ps() const { return ps_; }
    constexpr double as_ns() const { return static_cast<double>(ps_) / 1000.0; }

    constexpr Duration operator+(Duration other) const { return Duration(ps_ + other.ps_); }
    constexpr Duration operator-(Duration other) const { return Duration(ps_ - other.ps_); }
    constexpr Duration operator*(std::int64_t k) const { return Duration(ps_ * k); }
    constexpr Duration& operator+=(Duration other) {
        ps_ += other.ps_;
        return *this;
    }

    friend constexpr auto operator<=>(Duration, Duration) = default;

    // "14", "13.5", "0.25" -- nanoseconds with trailing zeros trimmed.
    std::string ns_str() const;

private:
    constexpr explicit Duration(std::int64_t value) : ps_(value) {}
    std::int64_t ps_ = 0;
};

// How instructions are laid out in the instruction image and how the PC
// advances. Packed: contiguous halfwords, PC+2 after a compressed
// instruction. WordAligned: one word per instruction, PC+4 always, with
// compressed instructions in the low halfword of their word.
enum class LayoutMode : std::uint8_t { Packed, WordAligned };

std::string to_string(LayoutMode mode);
LayoutMode layout_mode_from_string(const std::string& name);

inline std::int32_t sign_extend(std::uint32_t value, int bits) {
    const int shift = 32 - bits;
    return static_cast<std::int32_t>(value << shift) >> shift;
}

}  // namespace rvdc
