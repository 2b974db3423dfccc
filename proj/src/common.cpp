#include "rvdc/common.hpp"

#include <cmath>
#include <cstdio>

#include "rvdc/errors.hpp"

namespace rvdc {

std::string Duration::ns_str() const {
    const bool negative = ps_ < 0;
    const std::int64_t abs_ps = negative ? -ps_ : ps_;
    std::string out = negative ? "-" : "";
    out += std::to_string(abs_ps / 1000);
    std::int64_t frac = abs_ps % 1000;
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac));
        std::string digits(buf);
        while (digits.back() == '0') digits.pop_back();
        out += digits;
    }
    return out;
}

std::string to_string(LayoutMode mode) {
    return mode == LayoutMode::Packed ? "packed" : "word-aligned";
}

LayoutMode layout_mode_from_string(const std::string& name) {
    if (name == "packed") return LayoutMode::Packed;
    if (name == "word-aligned") return LayoutMode::WordAligned;
    throw Error("unknown layout mode '" + name + "' (expected packed or word-aligned)");
}

}  // namespace rvdc
