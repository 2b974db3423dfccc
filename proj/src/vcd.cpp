#include "rvdc/vcd.hpp"

namespace rvdc {

int VcdWriter::add_wire(const std::string& name, int width) {
    Signal sig;
    sig.name = name;
    sig.width = width;
    // printable short identifiers starting at '!'
    sig.id = std::string(1, static_cast<char>('!' + signals_.size()));
    signals_.push_back(sig);
    return static_cast<int>(signals_.size()) - 1;
}

void VcdWriter::write_header(const std::string& module, const std::string& timescale) {
    out_ << "$timescale " << timescale << " $end\n";
    out_ << "$scope module " << module << " $end\n";
    for (const auto& sig : signals_) {
        out_ << "$var wire " << sig.width << ' ' << sig.id << ' ' << sig.name << " $end\n";
    }
    out_ << "$upscope $end\n";
    out_ << "$enddefinitions $end\n";
    out_ << "$dumpvars\n";
}

void VcdWriter::dump_initial(int signal, std::uint64_t value) {
    Signal& sig = signals_[static_cast<std::size_t>(signal)];
    sig.last = value;
    emit_value(sig, value);
}

void VcdWriter::end_initial() { out_ << "$end\n"; }

void VcdWriter::at(std::int64_t time) { pending_time_ = time; }

void VcdWriter::change(int signal, std::uint64_t value) {
    Signal& sig = signals_[static_cast<std::size_t>(signal)];
    if (sig.last == value) return;
    flush_time();
    sig.last = value;
    emit_value(sig, value);
}

void VcdWriter::finish(std::int64_t time) {
    if (time != last_written_time_) {
        out_ << '#' << time << '\n';
        last_written_time_ = time;
    }
}

void VcdWriter::flush_time() {
    if (pending_time_ == last_written_time_) return;
    out_ << '#' << pending_time_ << '\n';
    last_written_time_ = pending_time_;
}

void VcdWriter::emit_value(const Signal& sig, std::uint64_t value) {
    if (sig.width == 1) {
        out_ << (value & 1) << sig.id << '\n';
        return;
    }
    // binary vector, leading zeros trimmed
    std::string bits;
    for (int b = sig.width - 1; b >= 0; --b) {
        const bool set = (value >> b) & 1;
        if (bits.empty() && !set && b != 0) continue;
        bits.push_back(set ? '1' : '0');
    }
    out_ << 'b' << bits << ' ' << sig.id << '\n';
}

}  // namespace rvdc
