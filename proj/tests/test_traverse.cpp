#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lawtraverse/synthlab.hpp"
#include "lawtraverse/traverse.hpp"
#include "test_support.hpp"

using namespace lawtraverse;
using lawtraverse::testing::law_a;
using lawtraverse::testing::law_b;
using lawtraverse::testing::worked_family;

// Boundary where the two inverse slopes meet, from a 200-step mpmath bisection.
constexpr double kWorkedBoundary = 0.55018482011505996;

TEST_CASE("candidate_set") {
    const auto fam = worked_family();
    CHECK(candidate_set(fam, 0.3) == std::vector<std::string>{"A"});
    CHECK(candidate_set(fam, 0.5) == std::vector<std::string>{"A", "B"});
    CHECK(candidate_set(fam, 0.95).empty());
    CHECK(best_shape(fam, 0.95).empty());
}

TEST_CASE("partition of the worked family") {
    const auto p = partition(worked_family(), 0.85, 0.40);
    REQUIRE(p.segments.size() == 2);
    CHECK(p.segments[0].shape == "B");
    CHECK(p.segments[1].shape == "A");
    CHECK(p.e_start() == 0.85);
    CHECK(p.e_end() == 0.40);
    CHECK(p.segments[0].e_low == p.segments[1].e_high);
    CHECK(std::abs(p.segments[0].e_low - kWorkedBoundary) < 1e-6 * 0.85);
    // the boundary is a root of q_A - q_B
    const double e = p.segments[0].e_low;
    const double slope_gap = std::abs(inverse_slope(law_a(), e) - inverse_slope(law_b(), e));
    CHECK(slope_gap < 1e-4);
}

TEST_CASE("partition edge cases") {
    SUBCASE("single law covers its window") {
        const LawFamily fam({law_a()});
        const auto p = partition(fam, 1.0, 0.2);
        REQUIRE(p.segments.size() == 1);
        CHECK(p.e_start() == doctest::Approx(0.9));
        CHECK(p.e_end() == 0.2);
    }
    SUBCASE("identical laws tie-break on shape_order") {
        auto x = law_a();
        x.shape = "X";
        const LawFamily fam({law_a(), x}, "", std::vector<std::string>{"X", "A"});
        const auto p = partition(fam, 0.9, 0.2);
        REQUIRE(p.segments.size() == 1);
        CHECK(p.segments[0].shape == "X");
        const LawFamily lexi({x, law_a()});
        CHECK(partition(lexi, 0.9, 0.2).segments[0].shape == "A");
    }
    SUBCASE("range clipped to the reachable window") {
        const auto p = partition(worked_family(), 2.0, 0.40);
        CHECK(p.e_start() == doctest::Approx(0.9));
        CHECK(p.segments.front().shape == "A");
        // A starts at 0.9, B only becomes available at 0.85
        CHECK(p.segments[0].e_low == doctest::Approx(0.85).epsilon(1e-6));
    }
    SUBCASE("bottom below every asymptote is clipped") {
        const auto p = partition(LawFamily({law_a()}), 0.9, 0.05);
        CHECK(p.e_end() > 0.1);
        CHECK(p.e_end() < 0.1 + 1e-5);
    }
    CHECK_THROWS_AS(partition(worked_family(), 0.4, 0.85), DomainError);
    CHECK_THROWS_AS(partition(worked_family(), 0.85, 0.4, {8, 0, false}), DomainError);
    CHECK_THROWS_AS(partition(LawFamily({law_a()}), 0.09, 0.01), DomainError);
    CHECK_THROWS_AS(partition(LawFamily({law_b()}), 0.99, 0.9), DomainError);
}

TEST_CASE("log grid finds the same boundary") {
    const auto p = partition(worked_family(), 0.85, 0.40, {512, 0, true});
    REQUIRE(p.segments.size() == 2);
    CHECK(std::abs(p.segments[0].e_low - kWorkedBoundary) < 1e-6);
}

TEST_CASE("property: partition is optimal at grid errors and tiles the domain") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto fam = lawtraverse::testing::random_family(seed, 3 + seed % 3);
        const double top = fam.min_start_error();
        const double bottom = lawtraverse::testing::max_asymptote(fam) + 0.02;
        const auto p = partition(fam, top, bottom);
        CHECK(p.e_start() == top);
        CHECK(p.e_end() == bottom);
        for (std::size_t i = 1; i < p.segments.size(); ++i) CHECK(p.segments[i].e_high == p.segments[i - 1].e_low);
        for (const auto& seg : p.segments) {
            CHECK(seg.e_high > seg.e_low);
            for (int k = 1; k < 10; ++k) {
                const double e = seg.e_low + (seg.e_high - seg.e_low) * k / 10.0;
                const double mine = inverse_slope(fam.at(seg.shape), e);
                for (const auto& law : fam.laws())
                    if (reachable(law, e)) CHECK(mine >= inverse_slope(law, e) - 1e-9 * std::abs(mine));
            }
        }
    }
}

TEST_CASE("property: permuting the family does not move boundaries") {
    const auto fam = lawtraverse::testing::random_family(42, 5);
    auto laws = fam.laws();
    std::reverse(laws.begin(), laws.end());
    const LawFamily flipped(laws, "random", fam.shape_order());
    const double top = fam.min_start_error();
    const double bottom = lawtraverse::testing::max_asymptote(fam) + 0.02;
    const auto p1 = partition(fam, top, bottom);
    const auto p2 = partition(flipped, top, bottom);
    REQUIRE(p1.segments.size() == p2.segments.size());
    for (std::size_t i = 0; i < p1.segments.size(); ++i) CHECK(p1.segments[i] == p2.segments[i]);
}

TEST_CASE("greedy_schedule") {
    const auto s = greedy_schedule(partition(worked_family(), 0.85, 0.40));
    CHECK(s.kind == ScheduleKind::greedy);
    CHECK(s.initial == "B");
    REQUIRE(s.transitions.size() == 1);
    CHECK(s.transitions[0].shape == "A");
    CHECK(s.transitions[0].trigger == TriggerType::error);
    CHECK(std::abs(s.transitions[0].value - kWorkedBoundary) < 1e-6);

    const auto single = greedy_schedule(partition(LawFamily({law_a()}), 0.9, 0.2));
    CHECK(single.initial == "A");
    CHECK(single.transitions.empty());
}

TEST_CASE("greedy schedule of a three-law family matches the micro-step oracle") {
    // common start error 1; switches near 0.646 and 0.458
    const LawFamily fam({PowerLaw::make(0.5, 1.0, 0.5, 1.0, "P1"), PowerLaw::make(2.8, 1.0, 0.3, 4.0, "P2"),
                         PowerLaw::make(14.4, 1.0, 0.1, 16.0, "P3")},
                        "", std::vector<std::string>{"P1", "P2", "P3"});
    const double top = 1.0, bottom = 0.12;
    const auto s = greedy_schedule(partition(fam, top, bottom));
    const auto oracle = greedy_micro_step_oracle(fam, top, bottom);
    CHECK(oracle.complete);
    CHECK(s.initial == oracle.initial);
    REQUIRE(s.transitions.size() == oracle.transitions.size());
    CHECK(s.transitions.size() == 2);
    const double step = 1e-4 * (top - bottom);
    for (std::size_t i = 0; i < s.transitions.size(); ++i) {
        CHECK(s.transitions[i].shape == oracle.transitions[i].to);
        CHECK(std::abs(s.transitions[i].value - oracle.transitions[i].error) <= step * (1 + 1e-9));
    }
}

TEST_CASE("is_monotone") {
    const auto fam = worked_family();
    Schedule ba{ScheduleKind::explicit_, "B", {{"A", TriggerType::error, 0.5}}};
    CHECK(is_monotone(ba, fam));
    Schedule aba{ScheduleKind::explicit_, "A", {{"B", TriggerType::error, 0.6}, {"A", TriggerType::error, 0.5}}};
    CHECK_FALSE(is_monotone(aba, fam));
    CHECK_THROWS_AS(is_monotone(ba, LawFamily({law_a(), law_b()})), DomainError);

    for (const auto& name : preset_names()) {
        const auto preset = preset_family(name);
        const auto p = partition(preset, preset.max_start_error(), lawtraverse::testing::max_asymptote(preset) + 1e-3);
        CHECK_MESSAGE(is_monotone(greedy_schedule(p), preset), name);
    }
}

TEST_CASE("baseline_schedule") {
    const auto lin = baseline_schedule(ScheduleKind::linear, {"P1", "P2"}, 10);
    REQUIRE(lin.transitions.size() == 1);
    CHECK(lin.initial == "P1");
    CHECK(lin.transitions[0].trigger == TriggerType::compute);
    CHECK(lin.transitions[0].value == 5.0);

    const auto lin4 = baseline_schedule(ScheduleKind::linear, {"P1", "P2", "P3", "P4"}, 8);
    REQUIRE(lin4.transitions.size() == 3);
    CHECK(lin4.transitions[0].value == 2.0);
    CHECK(lin4.transitions[1].value == 4.0);
    CHECK(lin4.transitions[2].value == 6.0);

    const auto lg = baseline_schedule(ScheduleKind::logarithmic, {"P1", "P2", "P3"}, 1000, 1e-3);
    REQUIRE(lg.transitions.size() == 2);
    CHECK(lg.transitions[0].value == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(lg.transitions[1].value == doctest::Approx(100.0).epsilon(1e-12));

    CHECK_THROWS_AS(baseline_schedule(ScheduleKind::linear, {"P1"}, 10), DomainError);
    CHECK_THROWS_AS(baseline_schedule(ScheduleKind::linear, {"P1", "P2"}, 0), DomainError);
    CHECK_THROWS_AS(baseline_schedule(ScheduleKind::logarithmic, {"P1", "P2"}, 10, 1.0), DomainError);
}

TEST_CASE("schedule validation") {
    Schedule bad{ScheduleKind::explicit_, "A", {{"B", TriggerType::error, 0.5}, {"A", TriggerType::error, 0.6}}};
    CHECK_THROWS_AS(validate(bad), DomainError);
    Schedule mixed{ScheduleKind::explicit_, "A", {{"B", TriggerType::error, 0.5}, {"A", TriggerType::compute, 6}}};
    CHECK_THROWS_AS(validate(mixed), DomainError);
}
