// rvdc -- assembler, disassembler and timing-accurate simulator for a
// small RISC-V subset core with an instruction-driven dynamic clock.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvdc/assembler.hpp"
#include "rvdc/clocking.hpp"
#include "rvdc/errors.hpp"
#include "rvdc/simulator.hpp"

namespace {

struct ClockFlags {
    double master_mhz = 500.0;
    std::vector<double> delays_ns = {6.0, 6.0, 4.0};
};

void add_clock_flags(CLI::App* cmd, ClockFlags& flags) {
    cmd->add_option("--master-clock-mhz", flags.master_mhz,
                    "Master clock frequency in MHz")
        ->capture_default_str();
    cmd->add_option("--delays", flags.delays_ns,
                    "Unit delays in ns: regfile-read,alu,dmem-read")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
}

rvdc::SimConfig make_sim_config(const ClockFlags& flags) {
    rvdc::SimConfig cfg;
    cfg.clock = rvdc::ClockConfig::from_mhz(flags.master_mhz);
    for (double d : flags.delays_ns) {
        if (d < 0) throw rvdc::Error("delays must be non-negative");
    }
    cfg.delays.regfile_read = rvdc::Duration::ns(flags.delays_ns[0]);
    cfg.delays.alu = rvdc::Duration::ns(flags.delays_ns[1]);
    cfg.delays.dmem_read = rvdc::Duration::ns(flags.delays_ns[2]);
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rvdc::Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rvdc::Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw rvdc::Error("write to '" + path + "' failed");
}

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw rvdc::Error("memory range '" + spec + "' must look like BEGIN:END");
    }
    try {
        const unsigned long begin = std::stoul(spec.substr(0, colon), nullptr, 0);
        const unsigned long end = std::stoul(spec.substr(colon + 1), nullptr, 0);
        return {static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)};
    } catch (const std::exception&) {
        throw rvdc::Error("memory range '" + spec + "' is not numeric");
    }
}

// shared by run and report
struct RunFlags {
    std::string image_path;
    std::string format = "bintext";
    std::string mode = "packed";
    ClockFlags clock;
    int max_steps = 10000;
    int reset_cycles = 0;
    std::size_t dmem_words = rvdc::kDefaultDmemWords;
    std::string init_dmem;
    std::string init_dmem_format = "bintext";
    std::string trace_path;
    std::string vcd_path;
    bool dump_regs = false;
    std::vector<std::string> dump_mem;
    bool json = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("image", flags.image_path, "Instruction image file")->required();
    cmd->add_option("--format", flags.format, "Image file format: bintext, hextext or bin")
        ->capture_default_str();
    cmd->add_option("--mode", flags.mode, "Instruction layout: packed or word-aligned")
        ->capture_default_str();
    add_clock_flags(cmd, flags.clock);
    cmd->add_option("--max-steps", flags.max_steps, "Step limit before halting")
        ->capture_default_str();
    cmd->add_option("--reset-cycles", flags.reset_cycles,
                    "Idle reset periods prepended to the timeline")
        ->capture_default_str();
    cmd->add_option("--dmem-words", flags.dmem_words, "Data memory size in words")
        ->capture_default_str();
    cmd->add_option("--init-dmem", flags.init_dmem, "Data memory initialization image");
    cmd->add_option("--init-dmem-format", flags.init_dmem_format,
                    "Format of the --init-dmem file")
        ->capture_default_str();
    cmd->add_option("--trace", flags.trace_path, "Write a JSON-lines trace to this path");
    cmd->add_option("--vcd", flags.vcd_path, "Write a value change dump to this path");
    cmd->add_flag("--dump-regs", flags.dump_regs, "Print final register values");
    cmd->add_option("--dump-mem", flags.dump_mem,
                    "Print final data memory words in byte range BEGIN:END (repeatable)");
    cmd->add_flag("--json", flags.json, "Machine-readable output");
}

// returns the exit code; 2 flags an unsafe clock configuration
int execute_run(const RunFlags& flags, bool report_only) {
    rvdc::SimConfig cfg = make_sim_config(flags.clock);
    cfg.mode = rvdc::layout_mode_from_string(flags.mode);
    cfg.max_steps = flags.max_steps;
    cfg.reset_cycles = flags.reset_cycles;
    cfg.dmem_words = flags.dmem_words;
    if (!flags.init_dmem.empty()) {
        cfg.dmem_init = rvdc::load_image_file(
            flags.init_dmem, rvdc::image_format_from_string(flags.init_dmem_format));
    }

    const auto timing = rvdc::check_timing(cfg.delays, cfg.clock);
    if (!timing.ok) {
        std::cerr << timing.text();
        std::cerr << "error: derived clock is unsafe for this delay model\n";
        return 2;
    }

    const rvdc::Image img = rvdc::load_image_file(
        flags.image_path, rvdc::image_format_from_string(flags.format), cfg.mode);
    const rvdc::RunResult result = rvdc::run(img, cfg);

    if (!flags.trace_path.empty()) {
        std::ofstream out(flags.trace_path, std::ios::binary);
        if (!out) throw rvdc::Error("cannot open '" + flags.trace_path + "' for writing");
        rvdc::write_trace_jsonl(result, out);
    }
    if (!flags.vcd_path.empty()) {
        std::ofstream out(flags.vcd_path, std::ios::binary);
        if (!out) throw rvdc::Error("cannot open '" + flags.vcd_path + "' for writing");
        rvdc::emit_vcd(result, cfg, out);
    }

    std::cerr << "halt: " << rvdc::to_string(result.halt) << " after "
              << result.trace.size() << " instructions, " << result.total_time.ns_str()
              << "ns\n";

    if (report_only) {
        std::cout << (flags.json ? rvdc::efficiency_json(result.metrics) + "\n"
                                 : rvdc::efficiency_text(result.metrics));
        return 0;
    }

    rvdc::DumpSelectors sel;
    sel.regs = flags.dump_regs;
    sel.json = flags.json;
    for (const auto& spec : flags.dump_mem) sel.mem_ranges.push_back(parse_range(spec));
    if (sel.regs || !sel.mem_ranges.empty()) {
        std::cout << rvdc::dump_state(result, sel);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RISC-V subset toolchain with an instruction-driven dynamic clock"};
    app.require_subcommand(1);

    // --- asm ---
    auto* asm_cmd = app.add_subcommand("asm", "Assemble a source file into an image");
    std::string asm_input, asm_output;
    std::string asm_format = "bintext", asm_mode = "packed";
    asm_cmd->add_option("input", asm_input, "Assembler source file")->required();
    asm_cmd->add_option("-o,--output", asm_output, "Output image path")->required();
    asm_cmd->add_option("--format", asm_format, "Image file format: bintext, hextext or bin")
        ->capture_default_str();
    asm_cmd->add_option("--mode", asm_mode, "Instruction layout: packed or word-aligned")
        ->capture_default_str();

    // --- disasm ---
    auto* dis_cmd = app.add_subcommand("disasm", "Disassemble an image to source");
    std::string dis_input, dis_output;
    std::string dis_format = "bintext", dis_mode = "packed";
    dis_cmd->add_option("image", dis_input, "Instruction image file")->required();
    dis_cmd->add_option("-o,--output", dis_output, "Output path (default stdout)");
    dis_cmd->add_option("--format", dis_format, "Image file format: bintext, hextext or bin")
        ->capture_default_str();
    dis_cmd->add_option("--mode", dis_mode, "Instruction layout: packed or word-aligned")
        ->capture_default_str();

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "Execute an image and dump final state");
    RunFlags run_flags;
    add_run_flags(run_cmd, run_flags);

    // --- report ---
    auto* report_cmd =
        app.add_subcommand("report", "Execute an image and print efficiency metrics");
    RunFlags report_flags;
    add_run_flags(report_cmd, report_flags);

    // --- check-timing ---
    auto* check_cmd =
        app.add_subcommand("check-timing", "Verify per-instruction clock-period slack");
    ClockFlags check_flags;
    bool check_json = false;
    add_clock_flags(check_cmd, check_flags);
    check_cmd->add_flag("--json", check_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (asm_cmd->parsed()) {
            const auto prog = rvdc::parse(read_file(asm_input));
            const auto img =
                rvdc::assemble(prog, rvdc::layout_mode_from_string(asm_mode));
            rvdc::write_image_file(img, rvdc::image_format_from_string(asm_format),
                                   asm_output);
            std::cerr << "wrote " << img.bytes.size() << " bytes to " << asm_output << "\n";
            return 0;
        }
        if (dis_cmd->parsed()) {
            const auto img = rvdc::load_image_file(
                dis_input, rvdc::image_format_from_string(dis_format),
                rvdc::layout_mode_from_string(dis_mode));
            const std::string text =
                rvdc::disassemble_image(img, rvdc::layout_mode_from_string(dis_mode));
            if (dis_output.empty()) {
                std::cout << text;
            } else {
                write_file(dis_output, text);
            }
            return 0;
        }
        if (run_cmd->parsed()) return execute_run(run_flags, false);
        if (report_cmd->parsed()) return execute_run(report_flags, true);
        if (check_cmd->parsed()) {
            const rvdc::SimConfig cfg = make_sim_config(check_flags);
            const auto report = rvdc::check_timing(cfg.delays, cfg.clock);
            std::cout << (check_json ? report.json() + "\n" : report.text());
            return report.ok ? 0 : 2;
        }
    } catch (const rvdc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
