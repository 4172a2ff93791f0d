#include <cmath>
#include <string>

#include "doctest.h"
#include "gantt/energy.hpp"
#include "gantt/error.hpp"
#include "gantt/greedy.hpp"
#include "gantt/schedule.hpp"
#include "support.hpp"
#include "validator_fixtures.hpp"

using namespace gantt;
using namespace gantt::testing;

TEST_CASE("validator fixtures") {
  const auto fixtures = validator_fixtures();
  for (const auto& fx : fixtures) {
    CAPTURE(fx.name);
    const auto report = validate(fx.inst, fx.sched, fx.strict);
    CHECK(kinds_of(report) == fx.expected);
    CHECK(report.ok == fx.expected.empty());
  }
}

TEST_CASE("violation locations") {
  const auto report = validate(minimal(), schedule(2, {slot("TC", {{1, 1}}), slot("TC", {{1, 1}})}), false);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].slot == 1);
  CHECK(report.violations[0].tags == std::vector<TagId>{TagId(1)});

  const auto missing = validate(minimal(), schedule(2, {}), false);
  REQUIRE(missing.violations.size() == 1);
  CHECK_FALSE(missing.violations[0].slot.has_value());

  const auto two = validate(triangle(), schedule(3, {slot("TCC", {{1, 1}})}), false);
  REQUIRE(two.violations.size() == 1);
  CHECK(two.violations[0].nodes == std::vector<NodeId>{NodeId(1), NodeId(2), NodeId(3)});
}

TEST_CASE("validator rejects mismatched widths") {
  CHECK_THROWS_AS(validate(minimal(), schedule(3, {}), false), Error);
  try {
    validate(minimal(), schedule(2, {slot("TCO", {{1, 1}})}), false);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("metrics") {
  CHECK(metrics(minimal(), schedule(2, {slot("TC", {{1, 1}})})) == ScheduleMetrics{1, 1, 2});
  CHECK(metrics(path3(), schedule(3, {slot("TCT", {{1, 1}, {3, 2}})})) == ScheduleMetrics{1, 1, 3});
  CHECK(metrics(mutual_pair(), schedule(2, {slot("TC", {{1, 1}}), slot("CT", {{2, 2}})})) ==
        ScheduleMetrics{2, 2, 6});
  try {
    metrics(minimal(), schedule(2, {slot("TO", {{1, 1}})}));
    FAIL("expected InvalidSchedule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSchedule);
  }
}

TEST_CASE("removing a carrier cell lowers the objective by T") {
  const auto inst = path3();
  const auto with = schedule(3, {slot("TCC", {{1, 1}}), slot("OCT", {{3, 2}})});
  const auto without = schedule(3, {slot("TCO", {{1, 1}}), slot("OCT", {{3, 2}})});
  CHECK(metrics(inst, with).objective - metrics(inst, without).objective == inst.tag_count());
  CHECK(metrics(inst, with).length == metrics(inst, without).length);
}

TEST_CASE("savings") {
  const ScheduleMetrics base{4, 3, 0};
  const ScheduleMetrics cand{3, 3, 0};
  CHECK(carriers_saved(base, cand) == 1);
  CHECK(percent_carriers_saved(base, cand) == doctest::Approx(0.25));
  CHECK(carriers_saved(base, base) == 0);
  CHECK(timeslots_saved(base, cand) == 0);
  CHECK(percent_timeslots_saved(ScheduleMetrics{1, 4, 0}, ScheduleMetrics{1, 3, 0}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(percent_carriers_saved(ScheduleMetrics{0, 1, 0}, cand), Error);
  CHECK_THROWS_AS(percent_timeslots_saved(ScheduleMetrics{1, 0, 0}, cand), Error);
}

TEST_CASE("energy per tag") {
  const auto p = EnergyParams::firefly();
  CHECK(std::abs(energy_per_tag(1, 1, p) - 1660260e-9) <= 1e-9 * 1660260e-9);
  CHECK(std::abs(energy_per_tag(7, 14, p) - 852402e-9) <= 1e-9 * 852402e-9);
  CHECK(std::abs(energy_per_tag(0, 5, p) - 44544e-9) <= 1e-9 * 44544e-9);
  CHECK(energy_per_tag(1, 1, p) == doctest::Approx(1.6603e-3).epsilon(1e-4));
  CHECK(energy_per_tag(1, 2, p) == doctest::Approx(852.40e-6).epsilon(1e-5));
  // Equal ratios give bit-identical values.
  CHECK(energy_per_tag(3, 6, p) == energy_per_tag(1, 2, p));
  for (int c = 0; c < 40; ++c) CHECK(energy_per_tag(c + 1, 13, p) > energy_per_tag(c, 13, p));
  try {
    energy_per_tag(1, 0, p);
    FAIL("expected ZeroTags");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroTags);
  }
  EnergyParams bad = p;
  bad.p_rx = 0;
  CHECK_THROWS_AS(energy_per_tag(1, 1, bad), Error);
}

TEST_CASE("schedule JSON") {
  const auto s = schedule(2, {slot("TC", {{1, 1}})});
  CHECK(serialize_schedule(s) == R"({"n":2,"slots":[{"roles":"TC","interrogations":{"1":1}}]})");
  CHECK(parse_schedule(serialize_schedule(s)) == s);
  CHECK_THROWS_AS(parse_schedule(R"({"n":2,"slots":[{"roles":"TCO","interrogations":{}}]})"), Error);
  CHECK_THROWS_AS(parse_schedule(R"({"n":2,"slots":[{"roles":"TX","interrogations":{}}]})"), Error);
  CHECK_THROWS_AS(parse_schedule("[1,2"), Error);
}

TEST_CASE("schedule JSON round trip over 1000 valid schedules") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(s % 12);
    cfg.t = 1 + static_cast<int>(s % 20);
    cfg.seed = mix_seed(s + 99);
    const auto inst = generate_random_geometric(cfg);
    const auto sched = solve_greedy(inst);
    REQUIRE(validate(inst, sched, true).ok);
    const auto text = serialize_schedule(sched);
    REQUIRE(parse_schedule(text) == sched);
  }
}

TEST_CASE("valid schedules: L <= T and productive slots need a carrier") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(s % 15);
    cfg.t = 1 + static_cast<int>(s % 25);
    cfg.seed = mix_seed(s + 5);
    const auto inst = generate_random_geometric(cfg);
    const auto sched = solve_greedy(inst);
    const auto m = metrics(inst, sched);
    CHECK(m.length <= inst.tag_count());
    CHECK(m.carriers >= m.length);
  }
}

TEST_CASE("report JSON") {
  const auto report = validate(minimal(), schedule(2, {slot("TO", {{1, 1}})}), false);
  const auto text = serialize_report(report);
  CHECK(text.find(R"("ok":false)") != std::string::npos);
  CHECK(text.find(R"("kind":"V2")") != std::string::npos);
}
