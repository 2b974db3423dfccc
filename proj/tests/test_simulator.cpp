#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "reference_interpreter.hpp"
#include "rvdc/errors.hpp"
#include "rvdc/simulator.hpp"
#include "test_util.hpp"
#include "vcd_reader.hpp"

using namespace rvdc;

namespace {

Image golden_image(LayoutMode mode) { return assemble_source(testutil::kDemoSource, mode); }

SimConfig word_aligned_config() {
    SimConfig cfg;
    cfg.mode = LayoutMode::WordAligned;
    return cfg;
}

void check_golden_state(const MachineState& st) {
    const std::uint32_t expected[11] = {5, 4, 12, 5, 5, 2, 9, 40, 0, 45, 0};
    for (std::uint32_t r = 1; r <= 11; ++r) {
        CHECK(st.regs[r] == expected[r - 1]);
    }
    CHECK(st.regs[0] == 0);
    CHECK(st.dmem[0] == 5);
}

}  // namespace

TEST_CASE("golden run, word-aligned") {
    const RunResult res = run(golden_image(LayoutMode::WordAligned), word_aligned_config());
    check_golden_state(res.state);
    CHECK(res.halt == HaltReason::PcOutOfImage);
    CHECK(res.trace.size() == 11);  // the instruction at 40 is skipped
    CHECK(res.total_time == Duration::ns(150));
    CHECK(res.trace.back().cumulative_time == Duration::ns(150));

    // per-record invariants
    Duration acc = Duration::ps(0);
    for (const auto& rec : res.trace) {
        acc += rec.period;
        CHECK(rec.cumulative_time == acc);
        CHECK(rec.slack == rec.period - rec.delay);
        CHECK(rec.slack > Duration::ps(0));
    }
}

TEST_CASE("golden run metrics") {
    const RunResult res = run(golden_image(LayoutMode::WordAligned), word_aligned_config());
    CHECK(res.metrics.steps == 11);
    CHECK(res.metrics.fixed_total == Duration::ns(198));
    CHECK(res.metrics.dynamic_total == Duration::ns(150));
    CHECK(res.metrics.improvement == doctest::Approx(48.0 / 198.0).epsilon(1e-9));
    CHECK(res.metrics.busy == Duration::ns(124));
    CHECK(res.metrics.utilization_dynamic == doctest::Approx(124.0 / 150.0));
    CHECK(res.metrics.utilization_fixed == doctest::Approx(124.0 / 198.0));

    const std::string text = efficiency_text(res.metrics);
    CHECK(text.find("improvement") != std::string::npos);
    CHECK(text.find("24.24%") != std::string::npos);
    CHECK(text.find("utilization (dynamic)") != std::string::npos);
    CHECK(text.find("utilization (fixed)") != std::string::npos);
}

TEST_CASE("efficiency corner cases") {
    SUBCASE("all-LW program cannot improve") {
        std::vector<Instruction> prog(5, make_instruction(Mnemonic::LW, 1, 0, 0, 0));
        const Image img = testutil::image_from_instructions(prog, LayoutMode::WordAligned);
        const RunResult res = run(img, word_aligned_config());
        CHECK(res.metrics.improvement == doctest::Approx(0.0));
        CHECK(res.metrics.dynamic_total == res.metrics.fixed_total);
    }
    SUBCASE("single jal") {
        // jal to the image end halts cleanly after one 6ns period
        const Image img = testutil::image_from_instructions(
            {make_instruction(Mnemonic::JAL, 1, 0, 0, 4)}, LayoutMode::WordAligned);
        const RunResult res = run(img, word_aligned_config());
        CHECK(res.trace.size() == 1);
        CHECK(res.metrics.fixed_total == Duration::ns(18));
        CHECK(res.metrics.dynamic_total == Duration::ns(6));
        CHECK(res.metrics.improvement == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("empty image halts immediately") {
        Image img;
        img.mode = LayoutMode::Packed;
        const RunResult res = run(img, SimConfig{});
        CHECK(res.trace.empty());
        CHECK(res.halt == HaltReason::PcOutOfImage);
        CHECK(res.metrics.improvement == 0.0);
    }
}

TEST_CASE("halt reasons") {
    SUBCASE("max steps") {
        // beq x0, x0, 0 loops forever
        const Image img = testutil::image_from_instructions(
            {make_instruction(Mnemonic::BEQ, 0, 0, 0, 0)}, LayoutMode::WordAligned);
        SimConfig cfg = word_aligned_config();
        cfg.max_steps = 25;
        const RunResult res = run(img, cfg);
        CHECK(res.halt == HaltReason::MaxSteps);
        CHECK(res.trace.size() == 25);
    }
    SUBCASE("illegal instruction") {
        const Image img = assemble_source(".word 0\n", LayoutMode::WordAligned);
        const RunResult res = run(img, word_aligned_config());
        CHECK(res.halt == HaltReason::IllegalInstruction);
        CHECK(res.trace.empty());  // nothing executed, no time consumed
        CHECK(res.total_time == Duration::ps(0));
    }
    SUBCASE("illegal instruction can be configured to throw") {
        const Image img = assemble_source(".word 0\n", LayoutMode::WordAligned);
        SimConfig cfg = word_aligned_config();
        cfg.halt_on_illegal = false;
        CHECK_THROWS_AS(run(img, cfg), IllegalInstruction);
    }
    SUBCASE("memory fault") {
        const Image img =
            assemble_source("lw x1, 2044(x0)\nlw x1, 0(x0)\n", LayoutMode::WordAligned);
        SimConfig cfg = word_aligned_config();
        cfg.dmem_words = 4;  // 2044 is far out of bounds
        const RunResult res = run(img, cfg);
        CHECK(res.halt == HaltReason::MemoryFault);
        CHECK(res.trace.empty());
    }
    SUBCASE("jump fault") {
        const Image img = assemble_source("jal x1, 42\n.word 0\n.word 0\n.word 0\n"
                                          ".word 0\n.word 0\n.word 0\n.word 0\n"
                                          ".word 0\n.word 0\n.word 0\n.word 0\n",
                                          LayoutMode::Packed);
        SimConfig cfg;
        cfg.mode = LayoutMode::Packed;
        const RunResult res = run(img, cfg);
        // target 42 is fine for packed; re-run word-aligned to fault
        CHECK(res.halt != HaltReason::JumpFault);

        const Image img2 = assemble_source("addi x1, x0, 0\n", LayoutMode::WordAligned);
        (void)img2;
        Image odd = testutil::image_from_instructions(
            {make_instruction(Mnemonic::JAL, 1, 0, 0, 42)}, LayoutMode::WordAligned);
        const RunResult res2 = run(odd, word_aligned_config());
        CHECK(res2.halt == HaltReason::JumpFault);
        CHECK(res2.trace.empty());
    }
}

TEST_CASE("packed fetch width discrimination") {
    const Image img = golden_image(LayoutMode::Packed);
    SimConfig cfg;
    cfg.mode = LayoutMode::Packed;
    const RunResult res = run(img, cfg);
    // same data flow, different link addresses than word-aligned
    CHECK(res.state.regs[2] == 4);
    CHECK(res.state.regs[7] == 9);
    CHECK(res.state.regs[8] == 38);   // link after jal at 34
    CHECK(res.state.regs[10] == 43);  // 38 + 5
    CHECK(res.trace.size() == 11);
    CHECK(res.total_time == Duration::ns(150));  // same opcode mix, same time
    const auto& cand = res.trace[7];
    CHECK(cand.compressed);
    CHECK(cand.pc == 28);
    CHECK(res.trace[8].pc == 30);  // packed: +2 after the compressed instruction
}

TEST_CASE("oracle equivalence on random programs") {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 1000; ++trial) {
        const LayoutMode mode = trial % 2 ? LayoutMode::Packed : LayoutMode::WordAligned;
        const auto prog = mode == LayoutMode::WordAligned
                              ? testutil::random_flow_program(rng, 20)
                              : testutil::random_linear_program(rng, 20);
        const Image img = testutil::image_from_instructions(prog, mode);
        SimConfig cfg;
        cfg.mode = mode;
        const RunResult res = run(img, cfg);
        const auto ref = refsim::interpret(img, mode, cfg.max_steps, cfg.dmem_words);
        REQUIRE(static_cast<int>(res.trace.size()) == ref.executed);
        REQUIRE(res.state.regs == ref.machine.regs);
        REQUIRE(res.state.dmem == ref.machine.mem);
        REQUIRE(res.state.regs[0] == 0);
    }
}

TEST_CASE("timing and semantics are separable") {
    std::mt19937 rng(31415);
    SimConfig fast = word_aligned_config();  // 500MHz, 6/6/4ns
    SimConfig slow = word_aligned_config();
    slow.clock.master_period = Duration::ns(3);
    slow.delays = DelayModel{Duration::ns(1), Duration::ns(1), Duration::ns(1)};
    REQUIRE(check_timing(fast.delays, fast.clock).ok);
    REQUIRE(check_timing(slow.delays, slow.clock).ok);
    for (int trial = 0; trial < 200; ++trial) {
        const auto prog = testutil::random_flow_program(rng, 16);
        const Image img = testutil::image_from_instructions(prog, LayoutMode::WordAligned);
        const RunResult a = run(img, fast);
        const RunResult b = run(img, slow);
        REQUIRE(a.state == b.state);
        REQUIRE(a.trace.size() == b.trace.size());
        REQUIRE(a.total_time != b.total_time);  // time scales, values do not
    }
}

TEST_CASE("deterministic byte-identical outputs") {
    const Image img = golden_image(LayoutMode::WordAligned);
    const SimConfig cfg = word_aligned_config();
    std::ostringstream t1, t2, v1, v2;
    const RunResult r1 = run(img, cfg);
    const RunResult r2 = run(img, cfg);
    write_trace_jsonl(r1, t1);
    write_trace_jsonl(r2, t2);
    emit_vcd(r1, cfg, v1);
    emit_vcd(r2, cfg, v2);
    CHECK(t1.str() == t2.str());
    CHECK(v1.str() == v2.str());
    CHECK_FALSE(t1.str().empty());
}

TEST_CASE("trace jsonl shape") {
    const RunResult res = run(golden_image(LayoutMode::WordAligned), word_aligned_config());
    std::ostringstream out;
    write_trace_jsonl(res, out);
    std::istringstream in(out.str());
    std::string line;
    int count = 0;
    Duration acc = Duration::ps(0);
    while (std::getline(in, line)) {
        const auto doc = nlohmann::json::parse(line);  // must parse as JSON
        CHECK(doc.at("step") == count);
        CHECK(doc.at("period_ns").is_number());
        acc += Duration::ns(doc.at("period_ns").get<double>());
        CHECK(Duration::ns(doc.at("cumulative_time_ns").get<double>()) == acc);
        CHECK(doc.contains("effects"));
        ++count;
    }
    CHECK(count == 11);
    // machine-readable output carries no escape/control bytes
    CHECK(out.str().find('\x1b') == std::string::npos);
}

TEST_CASE("vcd waveform matches trace timing") {
    const SimConfig cfg = word_aligned_config();
    const RunResult res = run(golden_image(LayoutMode::WordAligned), cfg);
    std::ostringstream out;
    emit_vcd(res, cfg, out);

    const auto doc = vcdread::parse(out.str());
    CHECK(doc.timescale == "1ps");
    CHECK(doc.vars.size() == 5);

    const auto edges = doc.rising_edges("clk");
    REQUIRE(edges.size() == res.trace.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        CHECK(edges[i] == res.trace[i].cumulative_time.as_ps());
    }

    // master clock toggles every half master period
    const auto& master = doc.var_named("master_clk");
    std::int64_t last = -1;
    for (const auto& c : doc.changes) {
        if (c.id != master.id) continue;
        if (last >= 0) CHECK(c.time - last == cfg.clock.master_period.as_ps() / 2);
        last = c.time;
    }

    // one idle tail period past the end of the run
    CHECK(doc.final_time ==
          res.total_time.as_ps() + period_of(kResetShift, cfg.clock).as_ps());

    // a shift-8 segment holds the derived clock high 8ns then low 10ns
    const auto& clk = doc.var_named("clk");
    const std::int64_t lw_start = res.trace[5].cumulative_time.as_ps() -
                                  res.trace[5].period.as_ps();
    bool saw_fall = false;
    for (const auto& c : doc.changes) {
        if (c.id == clk.id && c.value == 0 && c.time > lw_start &&
            c.time < lw_start + 18000) {
            CHECK(c.time - lw_start == 8000);
            saw_fall = true;
            break;
        }
    }
    CHECK(saw_fall);
}

TEST_CASE("vcd of an empty run is header-only") {
    Image img;
    const SimConfig cfg;
    const RunResult res = run(img, cfg);
    std::ostringstream out;
    emit_vcd(res, cfg, out);
    const auto doc = vcdread::parse(out.str());
    CHECK(doc.changes.empty());
    CHECK(out.str().find("\n#") == std::string::npos);  // no #time lines
}

TEST_CASE("reset cycles prepend idle periods") {
    SimConfig cfg = word_aligned_config();
    cfg.reset_cycles = 2;
    const RunResult res = run(golden_image(LayoutMode::WordAligned), cfg);
    CHECK(res.total_time == Duration::ns(150 + 28));
    CHECK(res.trace.front().cumulative_time == Duration::ns(28 + 14));
    check_golden_state(res.state);

    std::ostringstream out;
    emit_vcd(res, cfg, out);
    const auto doc = vcdread::parse(out.str());
    // reset periods produce two extra rising edges before the program runs
    CHECK(doc.rising_edges("clk").size() == res.trace.size() + cfg.reset_cycles);
}

TEST_CASE("data memory initialization image") {
    Image init;
    init.bytes = {5, 0, 0, 0, 7, 0, 0, 0};  // words 5, 7
    SimConfig cfg = word_aligned_config();
    cfg.dmem_init = init;
    const Image img = assemble_source("lw x1, 4(x0)\n", LayoutMode::WordAligned);
    const RunResult res = run(img, cfg);
    CHECK(res.state.regs[1] == 7);
    CHECK(res.state.dmem[0] == 5);
}

TEST_CASE("dump_state output") {
    const RunResult res = run(golden_image(LayoutMode::WordAligned), word_aligned_config());
    DumpSelectors sel;
    sel.regs = true;
    sel.mem_ranges.push_back({0, 4});
    const std::string text = dump_state(res, sel);
    CHECK(text.find("x3 = 12") != std::string::npos);
    CHECK(text.find("x10 = 45") != std::string::npos);
    CHECK(text.find("mem[0] = 5") != std::string::npos);

    sel.json = true;
    const auto doc = nlohmann::json::parse(dump_state(res, sel));
    CHECK(doc.at("regs")[3] == 12);
    CHECK(doc.at("mem").at("0") == 5);
    CHECK(doc.at("halt") == "pc-out-of-image");

    DumpSelectors bad;
    bad.mem_ranges.push_back({0, 3});
    CHECK_THROWS_AS(dump_state(res, bad), BadSelector);
    DumpSelectors oob;
    oob.mem_ranges.push_back({0, 4096});
    CHECK_THROWS_AS(dump_state(res, oob), BadSelector);
}

TEST_CASE("fetch edge cases") {
    const Image img = golden_image(LayoutMode::Packed);
    CHECK_FALSE(fetch(img, img.end(), LayoutMode::Packed).has_value());
    CHECK_FALSE(fetch(img, 1, LayoutMode::Packed).has_value());
    CHECK_FALSE(fetch(img, 46, LayoutMode::WordAligned).has_value());
    const auto f = fetch(img, 28, LayoutMode::Packed);
    REQUIRE(f.has_value());
    CHECK(f->compressed);
    CHECK(f->raw == 0x8d6d);

    // truncated base instruction: a lone base halfword at the end
    Image trunc;
    trunc.bytes = {0x93, 0x00};  // low half of an addi
    CHECK_FALSE(fetch(trunc, 0, LayoutMode::Packed).has_value());
}
