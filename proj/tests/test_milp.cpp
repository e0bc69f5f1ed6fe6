#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace mtd::milp;

TEST_CASE("variable labels are validated") {
  BinaryProgram p;
  p.add_var("x_1");
  CHECK_THROWS_AS(p.add_var("x_1"), ModelError);
  CHECK_THROWS_AS(p.add_var("1x"), ModelError);
  CHECK_THROWS_AS(p.add_var("a-b"), ModelError);
  CHECK_THROWS_AS(p.add_var(""), ModelError);
  CHECK(p.find("x_1").has_value());
  CHECK_FALSE(p.find("nope").has_value());
}

TEST_CASE("constraints reject unknown and repeated variables") {
  BinaryProgram p;
  VarId x = p.add_var("x");
  CHECK_THROWS_AS(p.add_constraint({{{1, VarId{7}}}, Sense::LessEqual, 1, "t"}), ModelError);
  CHECK_THROWS_AS(p.add_constraint({{{1, x}, {2, x}}, Sense::LessEqual, 1, "t"}), ModelError);
  CHECK_THROWS_AS(p.add_constraint({{{1, x}}, Sense::LessEqual, 1, ""}), ModelError);
  CHECK_THROWS_AS(p.set_objective(ObjectiveSense::Maximize, {{1, VarId{3}}}), ModelError);
}

TEST_CASE("product linearisation admits exactly w = x*y") {
  BinaryProgram p;
  VarId x = p.add_var("x"), y = p.add_var("y");
  VarId w = p.linearize_product(x, y);
  CHECK(p.label(w) == "prod_x_y");
  CHECK(p.constraints().size() == 3);
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<std::uint8_t> a{std::uint8_t(mask & 1), std::uint8_t(mask >> 1 & 1),
                                std::uint8_t(mask >> 2 & 1)};
    CHECK(is_feasible(p, a) == (a[2] == (a[0] & a[1])));
  }
  CHECK_THROWS_AS(p.linearize_product(x, x), ModelError);
}

TEST_CASE("small models with known optima") {
  SUBCASE("knapsack") {
    BinaryProgram p;
    VarId a = p.add_var("a"), b = p.add_var("b"), c = p.add_var("c");
    p.add_constraint({{{3, a}, {4, b}, {5, c}}, Sense::LessEqual, 8, "cap"});
    p.set_objective(ObjectiveSense::Maximize, {{4, a}, {5, b}, {6, c}});
    auto s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == Rational(10));
    CHECK(s.value(a));
    CHECK(s.value(c));
    CHECK_FALSE(s.value(b));
  }
  SUBCASE("infeasible") {
    BinaryProgram p;
    VarId a = p.add_var("a"), b = p.add_var("b");
    p.add_constraint({{{1, a}, {1, b}}, Sense::GreaterEqual, 3, "too_much"});
    auto s = solve(p);
    CHECK(s.status == SolveStatus::Infeasible);
    CHECK_FALSE(s.has_assignment());
  }
  SUBCASE("minimise with fractional equality") {
    BinaryProgram p;
    VarId a = p.add_var("a"), b = p.add_var("b"), c = p.add_var("c");
    p.add_constraint({{{Rational(1, 2), a}, {Rational(1, 2), b}, {1, c}}, Sense::Equal, 1, "eq"});
    p.set_objective(ObjectiveSense::Minimize, {{3, a}, {3, b}, {5, c}});
    auto s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == Rational(5));
  }
  SUBCASE("empty model") {
    BinaryProgram p;
    auto s = solve(p);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == Rational(0));
  }
}

TEST_CASE("node budget yields budget_exceeded") {
  BinaryProgram p;
  std::vector<Term> obj;
  for (int i = 0; i < 20; ++i) obj.push_back({i % 3 + 1, p.add_var("x" + std::to_string(i))});
  std::vector<Term> row = obj;
  for (auto& t : row) t.coef = Rational(2);
  p.add_constraint({row, Sense::LessEqual, 13, "odd"});
  p.set_objective(ObjectiveSense::Maximize, obj);
  SolveLimits lim;
  lim.max_nodes = 3;
  auto s = solve(p, lim);
  CHECK(s.status == SolveStatus::BudgetExceeded);
  CHECK(to_string(s.status) == "budget_exceeded");
  CHECK(to_string(SolveStatus::Optimal) == "optimal");
  CHECK(to_string(SolveStatus::Infeasible) == "infeasible");
}

TEST_CASE("solver agrees with enumeration on random models") {
  mtd::Rng rng(20240611);
  for (int i = 0; i < 300; ++i) {
    auto p = gen::program(rng, 10, 8);
    auto ref = oracle::enumerate(p);
    auto s = solve(p);
    CAPTURE(i);
    CAPTURE(export_lp(p));
    if (!ref.feasible) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == ref.best);
    CHECK(is_feasible(p, s.assignment));
    CHECK(evaluate_objective(p, s.assignment) == s.objective_value);
  }
}

TEST_CASE("solver is deterministic") {
  mtd::Rng rng(5);
  auto p = gen::program(rng, 12, 10);
  auto a = solve(p), b = solve(p);
  CHECK(a.assignment == b.assignment);
  CHECK(a.nodes == b.nodes);
}
