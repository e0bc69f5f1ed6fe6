#include "mtd/plsch_mtd.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace mtd {

using milp::Sense;
using milp::Term;
using milp::VarId;

void MtdInstance::validate() const {
  plsch.validate();
  if (pool.empty()) throw ScheduleError("configuration pool is empty");
  if (eligibility.size() != static_cast<int>(pool.size()))
    throw ScheduleError("eligibility matrix does not match the pool");
}

MtdModel build_composite(const MtdInstance& inst, const PlschOptions& options) {
  inst.validate();
  const auto& p = inst.plsch;
  const int T = p.horizon;
  const int C = static_cast<int>(inst.pool.size());

  MtdModel model;
  auto& prog = model.plsch.program;
  detail::add_action_vars(model.plsch, p);
  detail::add_start_vars(model.plsch, p, options);
  model.assign.resize(C);
  for (int c = 0; c < C; ++c)
    for (int t = 0; t <= T; ++t)
      model.assign[c].push_back(prog.add_var("a_" + std::to_string(c) + "_" + std::to_string(t)));
  detail::add_schedule_rows(model.plsch, p, options);

  for (int t = 0; t <= T; ++t) {
    std::vector<Term> terms;
    for (int c = 0; c < C; ++c) terms.push_back({1, model.assign[c][t]});
    terms.push_back({-1, model.plsch.action[t]});
    prog.add_constraint({terms, Sense::LessEqual, 0, "config_at_action"});
  }
  for (int c = 0; c < C; ++c) {
    std::vector<Term> terms;
    for (int t = 0; t <= T; ++t) terms.push_back({1, model.assign[c][t]});
    prog.add_constraint({terms, Sense::LessEqual, 1, "config_once"});
  }

  auto product = [&](int c, int t, int e, int f) {
    auto key = std::make_tuple(c, t, e, f);
    auto it = model.pair.find(key);
    if (it != model.pair.end()) return it->second;
    VarId w = prog.linearize_product(model.assign[c][t], model.assign[e][f],
                                     "w_" + std::to_string(c) + "_" + std::to_string(t) + "_" +
                                         std::to_string(e) + "_" + std::to_string(f));
    model.pair.emplace(key, w);
    return w;
  };

  for (int m = 0; m < p.machines(); ++m) {
    const auto& jobs = p.scenarios[m].jobs;
    for (int j = 0; j + 1 < static_cast<int>(jobs.size()); ++j) {
      const int d = jobs[j].duration;
      for (int t = 0; t <= T; ++t) {
        auto yj = model.plsch.y(m, j, t);
        if (!yj) continue;
        for (int f = 0; f <= T; ++f) {
          auto yk = model.plsch.y(m, j + 1, f);
          if (!yk) continue;
          // Earlier successor starts already conflict through no_overlap.
          if (options.preprocess && f < t + d) continue;
          std::vector<Term> terms{{1, *yj}, {1, *yk}};
          for (int c = 0; c < C; ++c)
            for (int e = 0; e < C; ++e)
              if (inst.eligibility(c, e)) terms.push_back({-1, product(c, t, e, f)});
          prog.add_constraint({terms, Sense::LessEqual, 1, "eligible_successor"});
        }
      }
    }
  }

  detail::set_occupation_objective(model.plsch, p);
  return model;
}

std::vector<std::pair<int, int>> bound_pairs(const MtdInstance& inst, const MtdPlan& plan) {
  std::set<std::pair<int, int>> out;
  for (const auto& [ref, t] : plan.schedule.job_starts) {
    auto next = plan.schedule.job_starts.find({ref.machine, ref.job + 1});
    if (next == plan.schedule.job_starts.end()) continue;
    auto c = plan.config_at.find(t);
    auto e = plan.config_at.find(next->second);
    if (c != plan.config_at.end() && e != plan.config_at.end()) out.insert({c->second, e->second});
  }
  (void)inst;
  return {out.begin(), out.end()};
}

std::optional<std::string> validate_plan(const MtdInstance& inst, const MtdPlan& plan) {
  if (auto err = validate_schedule(inst.plsch, plan.schedule)) return err;
  std::set<int> actions(plan.schedule.action_times.begin(), plan.schedule.action_times.end());
  std::set<int> used;
  for (const auto& [t, c] : plan.config_at) {
    if (!actions.contains(t)) return "configuration assigned without an action";
    if (c < 0 || c >= static_cast<int>(inst.pool.size())) return "unknown configuration";
    if (!used.insert(c).second) return "configuration reused";
  }
  for (const auto& [ref, t] : plan.schedule.job_starts) {
    auto next = plan.schedule.job_starts.find({ref.machine, ref.job + 1});
    if (next == plan.schedule.job_starts.end()) continue;
    auto c = plan.config_at.find(t);
    auto e = plan.config_at.find(next->second);
    if (c == plan.config_at.end() || e == plan.config_at.end())
      return "consecutive jobs without configurations";
    if (!inst.eligibility(c->second, e->second))
      return "consecutive jobs under ineligible configurations";
  }
  return std::nullopt;
}

MtdPlan extract_plan(const MtdInstance& inst, const MtdModel& model, const milp::Solution& sol) {
  MtdPlan plan;
  plan.schedule = extract_schedule(inst.plsch, model.plsch, sol);
  for (int c = 0; c < static_cast<int>(model.assign.size()); ++c)
    for (int t = 0; t < static_cast<int>(model.assign[c].size()); ++t)
      if (sol.value(model.assign[c][t])) {
        if (plan.config_at.contains(t))
          throw std::logic_error("two configurations at time " + std::to_string(t));
        plan.config_at[t] = c;
      }
  plan.config_starved = static_cast<int>(inst.pool.size()) < inst.plsch.budget;
  if (auto err = validate_plan(inst, plan)) throw std::logic_error("invalid plan: " + *err);
  return plan;
}

bool has_eligible_path(const EligibilityMatrix& alpha, int edges) {
  const int n = alpha.size();
  if (edges <= 0) return n > 0;
  std::vector<bool> on_path(n, false);
  std::function<bool(int, int)> extend = [&](int u, int len) {
    if (len >= edges) return true;
    for (int w = 0; w < n; ++w) {
      if (on_path[w] || !alpha(u, w)) continue;
      on_path[w] = true;
      bool ok = extend(w, len + 1);
      on_path[w] = false;
      if (ok) return true;
    }
    return false;
  };
  for (int s = 0; s < n; ++s) {
    on_path[s] = true;
    bool ok = extend(s, 0);
    on_path[s] = false;
    if (ok) return true;
  }
  return false;
}

}  // namespace mtd
