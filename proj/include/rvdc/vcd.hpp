#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rvdc {

// Minimal textual VCD writer ($timescale / $var wire / $dumpvars / #time).
// Signals are registered first, then the header is written, initial values
// dumped, and changes emitted in non-decreasing time order. Repeated values
// are suppressed.
class VcdWriter {
public:
    explicit VcdWriter(std::ostream& out) : out_(out) {}

    int add_wire(const std::string& name, int width);
    void write_header(const std::string& module, const std::string& timescale = "1ps");
    void dump_initial(int signal, std::uint64_t value);
    void end_initial();

    void at(std::int64_t time);  // set the timestamp for subsequent changes
    void change(int signal, std::uint64_t value);
    void finish(std::int64_t time);  // final timestamp marker

private:
    struct Signal {
        std::string name;
        std::string id;
        int width;
        std::uint64_t last = 0;
    };

    void emit_value(const Signal& sig, std::uint64_t value);
    void flush_time();

    std::ostream& out_;
    std::vector<Signal> signals_;
    std::int64_t pending_time_ = 0;
    std::int64_t last_written_time_ = -1;
};

}  // namespace rvdc
