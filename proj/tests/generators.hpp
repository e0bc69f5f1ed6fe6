#pragma once

// Random small instances for property tests.

#include <string>
#include <vector>

#include "mtd/jsar.hpp"
#include "mtd/milp.hpp"
#include "mtd/plsch.hpp"
#include "mtd/rng.hpp"

namespace gen {

using mtd::Rng;
using mtd::milp::Rational;

inline Rational coefficient(Rng& rng) {
  std::int64_t k = rng.uniform_int(-5, 5);
  if (k == 0) k = 1;
  switch (rng.uniform_int(0, 5)) {
    case 0: return Rational(k, 2);
    case 1: return Rational(k, 3);
    default: return Rational(k);
  }
}

inline mtd::milp::BinaryProgram program(Rng& rng, int max_vars = 12, int max_rows = 10) {
  using namespace mtd::milp;
  BinaryProgram p;
  const int n = static_cast<int>(rng.uniform_int(1, max_vars));
  std::vector<VarId> vars;
  for (int i = 0; i < n; ++i) vars.push_back(p.add_var("v" + std::to_string(i)));
  const int m = static_cast<int>(rng.uniform_int(0, max_rows));
  for (int r = 0; r < m; ++r) {
    std::vector<VarId> pick = vars;
    rng.shuffle(pick);
    pick.resize(rng.uniform_int(1, n));
    std::vector<Term> terms;
    Rational lo(0), hi(0);
    for (auto v : pick) {
      Rational c = coefficient(rng);
      terms.push_back({c, v});
      (c < Rational(0) ? lo : hi) += c;
    }
    // rhs in the upper part of the activity range: rows bind but rarely all fail
    Rational span = hi - lo;
    Rational rhs = lo + span * Rational(rng.uniform_int(3, 8), 8);
    static const Sense senses[] = {Sense::LessEqual, Sense::LessEqual, Sense::LessEqual,
                                   Sense::GreaterEqual, Sense::GreaterEqual, Sense::Equal};
    Sense s = senses[rng.uniform_int(0, 5)];
    if (s == Sense::GreaterEqual) rhs = lo + span * Rational(rng.uniform_int(0, 5), 8);
    if (s == Sense::Equal) {
      // usually attainable
      Rational sum(0);
      for (const auto& t : terms)
        if (rng.uniform_int(0, 1)) sum += t.coef;
      rhs = rng.uniform_int(0, 3) ? sum : rhs;
    }
    p.add_constraint({terms, s, rhs, "row"});
  }
  std::vector<Term> obj;
  for (auto v : vars)
    if (rng.uniform_int(0, 4) > 0) obj.push_back({coefficient(rng), v});
  p.set_objective(rng.uniform_int(0, 1) ? ObjectiveSense::Maximize : ObjectiveSense::Minimize,
                  obj);
  return p;
}

inline mtd::AttackScenario scenario(const std::vector<int>& durations, int machine = 0) {
  mtd::AttackScenario s;
  s.machine_id = machine;
  int idx = 1;
  for (int d : durations) s.jobs.push_back({mtd::AttackKind::Short, d, idx++});
  return s;
}

inline mtd::PlschInstance plsch(Rng& rng, int max_machines = 2, int max_horizon = 12,
                                int max_budget = 3, int max_jobs = 3) {
  mtd::PlschInstance inst;
  inst.horizon = static_cast<int>(rng.uniform_int(2, max_horizon));
  inst.budget = static_cast<int>(rng.uniform_int(0, max_budget));
  const int machines = static_cast<int>(rng.uniform_int(1, max_machines));
  for (int m = 0; m < machines; ++m) {
    std::vector<int> d(rng.uniform_int(1, max_jobs));
    for (auto& x : d) x = static_cast<int>(rng.uniform_int(1, std::max(1, inst.horizon * 2 / 3)));
    inst.scenarios.push_back(scenario(d, m));
  }
  return inst;
}

/// Synthetic configurations with chosen placement/routing vectors; only the
/// composite model and metrics look at them.
inline mtd::Configuration config(std::vector<int> placement, std::vector<int> routing) {
  return {std::move(placement), std::move(routing), 0};
}

/// `count` pairwise-distinct configurations over 2 services and 2 demands.
inline std::vector<mtd::Configuration> distinct_pool(int count) {
  std::vector<mtd::Configuration> pool;
  for (int i = 0; i < count; ++i) pool.push_back(config({i % 3, i / 3}, {i % 2, i / 2}));
  return pool;
}

}  // namespace gen
