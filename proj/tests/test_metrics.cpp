#include "doctest.h"
#include "generators.hpp"
#include "mtd/metrics.hpp"

using namespace mtd;

TEST_CASE("PoEC") {
  auto pool = gen::distinct_pool(4);
  CHECK(poec(pool, 0.0) == 1.0);
  CHECK(poec(pool, 1.0) == 0.0);
  std::vector<Configuration> three{{{0, 1, 2}, {0, 1}, 0},
                                   {{0, 1, 3}, {0, 1}, 0},
                                   {{0, 4, 4}, {0, 2}, 0}};
  CHECK(poec(three, 0.4) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(poec({pool[0]}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(poec({}, 0.1), std::invalid_argument);
}

TEST_CASE("PoR follows action-time order") {
  std::vector<Configuration> pool{{{0, 1, 2}, {0, 1}, 0}, {{0, 1, 3}, {0, 1}, 0},
                                  {{5, 5, 5}, {4, 4}, 0}};
  MtdPlan plan;
  plan.config_at = {{2, 0}, {6, 1}};
  CHECK(*por(plan, pool) == doctest::Approx(0.8));

  plan.config_at = {{1, 2}, {4, 0}, {9, 1}};
  auto terms = retention_terms(plan, pool);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].from == 2);
  CHECK(terms[0].to == 0);
  CHECK(terms[0].retained == 0.0);
  CHECK(terms[1].retained == doctest::Approx(0.8));
  CHECK(*por(plan, pool) == doctest::Approx(0.4));

  plan.config_at = {{3, 1}};
  CHECK_FALSE(por(plan, pool).has_value());
  CHECK(retention_terms(plan, pool).empty());
}

TEST_CASE("ACT") {
  PlschInstance inst;
  inst.horizon = 10;
  inst.budget = 3;
  inst.scenarios = {gen::scenario({4, 3}, 0), gen::scenario({5, 6}, 1)};
  DefenseSchedule empty;
  CHECK(act(empty, inst) == 1.0);

  DefenseSchedule s{{0, 4}, {{{0, 0}, 0}, {{0, 1}, 4}, {{1, 0}, 0}}, 12};
  // 12 of 20 machine-units occupied
  CHECK(act(s, inst) == doctest::Approx(0.4));
  inst.scenarios[1].jobs[1].duration = 2;
  DefenseSchedule all{{0, 4, 5}, {{{0, 0}, 0}, {{0, 1}, 4}, {{1, 0}, 0}, {{1, 1}, 5}}, 14};
  // 4 + 3 + 5 + 2 = 14 of 20
  CHECK(act(all, inst) == doctest::Approx(0.3));

  PlschInstance full;
  full.horizon = 6;
  full.budget = 2;
  full.scenarios = {gen::scenario({2, 4}, 0)};
  DefenseSchedule cover{{0, 2}, {{{0, 0}, 0}, {{0, 1}, 2}}, 6};
  CHECK(act(cover, full) == 0.0);

  PlschInstance nobody;
  nobody.horizon = 5;
  CHECK_THROWS_AS(act(empty, nobody), std::invalid_argument);
}

TEST_CASE("evaluate fills what it can") {
  PlschInstance p;
  p.horizon = 10;
  p.budget = 2;
  p.scenarios = {gen::scenario({3, 4})};
  MtdInstance inst{p, gen::distinct_pool(1), {}};
  inst.eligibility = eligibility_matrix(inst.pool, 0.1);
  MtdPlan plan;
  plan.schedule = {{0}, {{{0, 0}, 0}}, 3};
  plan.config_at = {{0, 0}};
  auto r = evaluate(inst, plan);
  CHECK_FALSE(r.poec.has_value());
  CHECK_FALSE(r.por.has_value());
  CHECK(r.act == doctest::Approx(0.7));

  inst.pool = gen::distinct_pool(3);
  inst.eligibility = eligibility_matrix(inst.pool, 0.1);
  r = evaluate(inst, plan);
  REQUIRE(r.poec.has_value());
  CHECK(*r.poec == 1.0);
}
