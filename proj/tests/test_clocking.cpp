#include <vector>

#include "doctest.h"
#include "rvdc/clocking.hpp"
#include "rvdc/errors.hpp"
#include "test_util.hpp"

using namespace rvdc;

TEST_CASE("phase decoder table") {
    CHECK(phase_decode(make_instruction(Mnemonic::LW, 1, 0, 0, 0).raw) == 8);
    CHECK(phase_decode(make_instruction(Mnemonic::C_LW, 1, 1, 0, 0).raw) == 8);
    CHECK(phase_decode(make_instruction(Mnemonic::JAL, 1, 0, 0, 0).raw) == 2);
    CHECK(phase_decode(make_instruction(Mnemonic::C_JAL, 1, 0, 0, 0).raw) == 2);
    CHECK(phase_decode(make_instruction(Mnemonic::ADD, 1, 2, 3, 0).raw) == 6);
    CHECK(phase_decode(make_instruction(Mnemonic::ADDI, 1, 0, 0, 1).raw) == 6);
    CHECK(phase_decode(make_instruction(Mnemonic::SW, 0, 0, 1, 0).raw) == 6);
    CHECK(phase_decode(make_instruction(Mnemonic::BEQ, 0, 1, 2, 0).raw) == 6);
    CHECK(phase_decode(make_instruction(Mnemonic::C_AND, 1, 1, 2, 0).raw) == 6);
    CHECK(phase_decode(make_instruction(Mnemonic::C_SW, 0, 1, 1, 0).raw) == 6);

    // reset pins the shift value no matter the word
    CHECK(phase_decode(make_instruction(Mnemonic::LW, 1, 0, 0, 0).raw, true) == 6);
    CHECK(phase_decode(0, true) == 6);

    // total on arbitrary words: the default arm yields 6
    CHECK(phase_decode(0) == 6);
    CHECK(phase_decode(0xffffffffu) == 6);
    CHECK(phase_decode(0b1100111u) == 6);  // jalr-shaped word
}

TEST_CASE("decoder totality and emitted range") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<std::uint32_t> any;
    for (int i = 0; i < 5000; ++i) {
        const ShiftValue s = phase_decode(any(rng));
        CHECK((s == 2 || s == 6 || s == 8));
    }
}

TEST_CASE("period arithmetic at 500MHz") {
    const ClockConfig cfg;  // 2ns master
    CHECK(period_of(8, cfg) == Duration::ns(18));
    CHECK(period_of(6, cfg) == Duration::ns(14));
    CHECK(period_of(2, cfg) == Duration::ns(6));
    CHECK_THROWS_AS(period_of(1, cfg), DegenerateShift);
    CHECK_THROWS_AS(period_of(0, cfg), DegenerateShift);

    CHECK(ClockConfig::from_mhz(500.0).master_period == Duration::ns(2));
    CHECK(ClockConfig::from_mhz(500.0).mhz() == doctest::Approx(500.0));
}

TEST_CASE("shifter counter trace") {
    SUBCASE("shift 2: levels repeat 1,0,0") {
        ShifterState st = shifter_reset();
        CHECK(st.count == 0);
        CHECK(st.clk_level);
        std::vector<int> counts, levels;
        for (int i = 0; i < 6; ++i) {
            st = shifter_tick(st, 2);
            counts.push_back(st.count);
            levels.push_back(st.clk_level ? 1 : 0);
        }
        CHECK(counts == std::vector<int>{1, 2, 0, 1, 2, 0});
        CHECK(levels == std::vector<int>{0, 0, 1, 0, 0, 1});
    }
    SUBCASE("shift 8: 4 ticks high, 5 low") {
        ShifterState st = shifter_reset();
        int high = st.clk_level ? 1 : 0;
        int low = st.clk_level ? 0 : 1;
        for (int i = 1; i < 9; ++i) {  // one full period spans 9 ticks
            st = shifter_tick(st, 8);
            (st.clk_level ? high : low) += 1;
        }
        CHECK(high == 4);
        CHECK(low == 5);
        st = shifter_tick(st, 8);
        CHECK(st.count == 0);  // wrap starts the next period
        CHECK(st.clk_level);
    }
    SUBCASE("reset forces count to 0") {
        ShifterState st = shifter_reset();
        for (int i = 0; i < 3; ++i) st = shifter_tick(st, 8);
        CHECK(st.count == 3);
        st = shifter_reset();
        CHECK(st.count == 0);
    }
}

TEST_CASE("waveform agrees with the closed-form period") {
    const ClockConfig cfg;
    for (ShiftValue shift : {ShiftValue(2), ShiftValue(3), ShiftValue(6), ShiftValue(8)}) {
        ShifterState st = shifter_reset();
        std::vector<std::int64_t> rising;
        std::int64_t t = 0;
        bool last = st.clk_level;
        for (int tick = 1; tick <= 12 * period_ticks(shift); ++tick) {
            st = shifter_tick(st, shift);
            t = tick * cfg.master_period.as_ps();
            if (st.clk_level && !last) rising.push_back(t);
            last = st.clk_level;
        }
        REQUIRE(rising.size() >= 10);
        for (std::size_t i = 1; i < rising.size(); ++i) {
            CHECK(rising[i] - rising[i - 1] == period_of(shift, cfg).as_ps());
        }
    }
}

TEST_CASE("duty asymmetry: the negative side is never shorter") {
    for (int s = kMinShift; s <= 15; ++s) {
        CHECK(low_ticks(static_cast<ShiftValue>(s)) >= high_ticks(static_cast<ShiftValue>(s)));
        CHECK(high_ticks(static_cast<ShiftValue>(s)) +
                  low_ticks(static_cast<ShiftValue>(s)) ==
              period_ticks(static_cast<ShiftValue>(s)));
    }
}

TEST_CASE("timing safety report") {
    const DelayModel delays;
    SUBCASE("defaults pass with 2ns minimum slack") {
        const TimingReport rep = check_timing(delays, ClockConfig{});
        CHECK(rep.ok);
        CHECK(rep.min_slack == Duration::ns(2));
        CHECK(rep.rows.size() == kMnemonicCount);
        for (const auto& row : rep.rows) {
            if (row.mnemonic == Mnemonic::LW) {
                CHECK(row.delay == Duration::ns(16));
                CHECK(row.period == Duration::ns(18));
                CHECK(row.slack == Duration::ns(2));
            }
        }
        CHECK(rep.text().find("LW: delay 16ns, shift 8, period 18ns, slack 2ns") !=
              std::string::npos);
    }
    SUBCASE("a 1.5ns master violates LW") {
        ClockConfig fast;
        fast.master_period = Duration::ns(1.5);
        const TimingReport rep = check_timing(delays, fast);
        CHECK_FALSE(rep.ok);
        for (const auto& row : rep.rows) {
            if (row.mnemonic == Mnemonic::LW) {
                CHECK(row.period == Duration::ps(13500));
                CHECK(row.slack.as_ps() < 0);
            }
        }
    }
    SUBCASE("zero delays always pass") {
        const TimingReport rep = check_timing(DelayModel{Duration::ps(0), Duration::ps(0),
                                                         Duration::ps(0)},
                                              ClockConfig{});
        CHECK(rep.ok);
    }
}

TEST_CASE("max period over the supported set") {
    CHECK(max_period(ClockConfig{}) == Duration::ns(18));
}
