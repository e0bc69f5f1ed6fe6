#include <cmath>

#include "doctest.h"
#include "mtd/scenario.hpp"

using namespace mtd;

TEST_CASE("attack durations stay inside their scaled range") {
  Rng rng(3);
  for (int scale : {1, 7, 20, 60, 400}) {
    TimingParams p{60, scale, 0};
    for (AttackKind k : {AttackKind::Long, AttackKind::Medium, AttackKind::Short}) {
      auto [lo, hi] = duration_range(k);
      const int min_d = std::max(1L, std::lround(lo * scale));
      const int max_d = std::max(1L, std::lround(hi * scale));
      for (int i = 0; i < 500; ++i) {
        auto job = sample_attack(k, p, rng);
        CHECK(job.kind == k);
        CHECK(job.duration >= min_d);
        CHECK(job.duration <= max_d);
      }
    }
  }
}

TEST_CASE("scenarios follow their templates and fit the horizon") {
  for (ScenarioKind kind : kAllScenarioKinds) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed);
      TimingParams p{60, 60, seed};
      auto s = compose_scenario(kind, p, rng);
      CAPTURE(to_string(kind));
      CHECK(s.kind == kind);
      CHECK(matches_template(s));
      CHECK(s.total_duration() <= p.horizon);
      for (std::size_t i = 0; i < s.jobs.size(); ++i) CHECK(s.jobs[i].index == int(i) + 1);
    }
  }
}

TEST_CASE("template checker rejects wrong shapes") {
  AttackScenario s;
  s.kind = ScenarioKind::Ransomware;
  s.jobs = {{AttackKind::Medium, 5, 1}, {AttackKind::Long, 4, 2}};
  CHECK_FALSE(matches_template(s));  // discovery must outlast penetration
  s.jobs[1].duration = 9;
  CHECK(matches_template(s));
  s.jobs.push_back({AttackKind::Medium, 3, 3});
  CHECK_FALSE(matches_template(s));

  s.kind = ScenarioKind::LateralMovement;
  s.jobs = {{AttackKind::Long, 9, 1}, {AttackKind::Medium, 3, 2}};
  CHECK_FALSE(matches_template(s));
  s.jobs = {{AttackKind::Long, 9, 1}, {AttackKind::Short, 1, 2}, {AttackKind::Short, 1, 3},
            {AttackKind::Short, 1, 4}, {AttackKind::Short, 1, 5}};
  CHECK_FALSE(matches_template(s));

  s.kind = ScenarioKind::Calibrated;
  s.jobs = {{AttackKind::Long, 9, 1}, {AttackKind::Long, 9, 2}};
  CHECK_FALSE(matches_template(s));
}

TEST_CASE("scenario sets are deterministic and machine streams independent") {
  const ScenarioKind kinds[] = {ScenarioKind::Calibrated, ScenarioKind::ZeroDay};
  TimingParams p{60, 60, 42};
  auto a = generate_scenario_set(kinds, 2, p);
  auto b = generate_scenario_set(kinds, 2, p);
  CHECK(a == b);
  REQUIRE(a.size() == 4);
  for (int m = 0; m < 4; ++m) CHECK(a[m].machine_id == m);

  // Adding machines leaves the earlier ones untouched.
  auto c = generate_scenario_set(kinds, 3, p);
  CHECK(c[0] == a[0]);
  CHECK(c[1] == a[1]);

  p.seed = 43;
  CHECK_FALSE(generate_scenario_set(kinds, 2, p) == a);
}

TEST_CASE("invalid parameters are rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(compose_scenario(ScenarioKind::Calibrated, {0, 60, 0}, rng), ScenarioError);
  CHECK_THROWS_AS(compose_scenario(ScenarioKind::Calibrated, {60, 0, 0}, rng), ScenarioError);
  // Long attack of at least 0.1 * 600 cannot fit in 5 units
  CHECK_THROWS_AS(compose_scenario(ScenarioKind::Calibrated, {5, 600, 0}, rng), ScenarioError);
  // a tiny scale leaves no room for discovery to outlast penetration
  CHECK_THROWS_AS(compose_scenario(ScenarioKind::Ransomware, {60, 3, 0}, rng), ScenarioError);
  const ScenarioKind kinds[] = {ScenarioKind::ZeroDay};
  CHECK_THROWS_AS(generate_scenario_set(kinds, 0, {60, 60, 0}), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_kind("worm"), ScenarioError);
  CHECK_THROWS_AS(parse_attack_kind("tiny"), ScenarioError);
  CHECK(parse_scenario_kind("lateral_movement") == ScenarioKind::LateralMovement);
  CHECK(parse_scenario_kind("zero_day") == ScenarioKind::ZeroDay);
}

TEST_CASE("mandatory failure message names the shortfall") {
  Rng rng(1);
  try {
    compose_scenario(ScenarioKind::Calibrated, {5, 600, 0}, rng);
    FAIL("expected throw");
  } catch (const ScenarioError& e) {
    std::string msg = e.what();
    CHECK(msg.find("calibrated") != std::string::npos);
    CHECK(msg.find("horizon 5") != std::string::npos);
  }
}
