#include "mtd/plsch.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mtd {

using milp::LinearConstraint;
using milp::Sense;
using milp::Term;
using milp::VarId;

void PlschInstance::validate() const {
  if (horizon < 1) throw ScheduleError("horizon must be >= 1");
  if (budget < 0) throw ScheduleError("budget must be >= 0");
  for (const auto& s : scenarios) {
    for (const auto& j : s.jobs) {
      if (j.duration < 1) throw ScheduleError("job durations must be >= 1");
      if (j.duration > horizon) throw ScheduleError("job duration exceeds the horizon");
    }
  }
}

namespace detail {

void add_action_vars(PlschModel& model, const PlschInstance& inst) {
  for (int t = 0; t <= inst.horizon; ++t)
    model.action.push_back(model.program.add_var("x_" + std::to_string(t)));
}

void add_start_vars(PlschModel& model, const PlschInstance& inst, const PlschOptions& options) {
  const int T = inst.horizon;
  model.start.resize(inst.scenarios.size());
  for (int m = 0; m < inst.machines(); ++m) {
    const auto& jobs = inst.scenarios[m].jobs;
    model.start[m].resize(jobs.size());
    int earliest = 0;
    for (int j = 0; j < static_cast<int>(jobs.size()); ++j) {
      const int d = jobs[j].duration;
      auto& row = model.start[m][j];
      row.resize(T + 1);
      for (int t = 0; t <= T; ++t) {
        if (options.preprocess && (j >= inst.budget || t < earliest || t + d > T)) continue;
        row[t] = model.program.add_var("y_" + std::to_string(m) + "_" + std::to_string(j) + "_" +
                                       std::to_string(t));
      }
      earliest += d;
    }
  }
}

void add_schedule_rows(PlschModel& model, const PlschInstance& inst, const PlschOptions& options) {
  auto& prog = model.program;
  const int T = inst.horizon;
  const int M = inst.machines();

  auto starts_of = [&](int m, int j) {
    std::vector<Term> terms;
    for (int t = 0; t <= T; ++t)
      if (auto v = model.y(m, j, t)) terms.push_back({1, *v});
    return terms;
  };

  for (int m = 0; m < M; ++m) {
    const auto& jobs = inst.scenarios[m].jobs;
    const int n = static_cast<int>(jobs.size());
    for (int j = 0; j < n; ++j) {
      auto once = starts_of(m, j);
      if (!once.empty()) prog.add_constraint({once, Sense::LessEqual, 1, "job_once"});
    }
    for (int j = 0; j + 1 < n; ++j) {
      auto pred = starts_of(m, j);
      auto succ = starts_of(m, j + 1);
      if (succ.empty()) continue;
      std::vector<Term> terms = pred;
      for (auto t : succ) terms.push_back({-1, t.var});
      prog.add_constraint({terms, Sense::GreaterEqual, 0, "job_order"});
    }
    for (int j = 0; j + 1 < n; ++j) {
      const int d = jobs[j].duration;
      for (int t = 0; t <= T; ++t) {
        auto yj = model.y(m, j, t);
        if (!yj) continue;
        for (int u = 0; u <= T; ++u) {
          auto yk = model.y(m, j + 1, u);
          if (!yk) continue;
          // Both at 1 is fine exactly when u >= t + d.
          if (options.preprocess && u >= t + d) continue;
          std::vector<Term> terms{{d + t, *yj}};
          if (T - u != 0) terms.push_back({T - u, *yk});
          prog.add_constraint({terms, Sense::LessEqual, T, "no_overlap"});
        }
      }
    }
    if (!options.preprocess && n > 0) {
      // The last job has no successor row bounding its finish time.
      const int d = jobs[n - 1].duration;
      for (int t = 0; t <= T; ++t)
        if (auto v = model.y(m, n - 1, t))
          prog.add_constraint({{{d + t, *v}}, Sense::LessEqual, T, "job_horizon"});
    }
    for (int t = 0; t <= T; ++t) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j)
        if (auto v = model.y(m, j, t)) terms.push_back({1, *v});
      if (terms.empty() && options.preprocess) continue;
      terms.push_back({-1, model.action[t]});
      prog.add_constraint({terms, Sense::LessEqual, 0, "start_needs_action"});
    }
  }

  for (int t = 0; t <= T; ++t) {
    std::vector<Term> terms;
    for (int m = 0; m < M; ++m)
      for (int j = 0; j < static_cast<int>(inst.scenarios[m].jobs.size()); ++j)
        if (auto v = model.y(m, j, t)) terms.push_back({1, *v});
    terms.push_back({-1, model.action[t]});
    prog.add_constraint({terms, Sense::GreaterEqual, 0, "action_starts_job"});
  }

  std::vector<Term> budget;
  for (auto x : model.action) budget.push_back({1, x});
  prog.add_constraint({budget, Sense::LessEqual, inst.budget, "budget"});
}

void set_occupation_objective(PlschModel& model, const PlschInstance& inst) {
  std::vector<Term> obj;
  for (int m = 0; m < inst.machines(); ++m)
    for (std::size_t j = 0; j < model.start[m].size(); ++j)
      for (const auto& v : model.start[m][j])
        if (v) obj.push_back({inst.scenarios[m].jobs[j].duration, *v});
  model.program.set_objective(milp::ObjectiveSense::Maximize, std::move(obj));
}

}  // namespace detail

PlschModel build_plsch(const PlschInstance& inst, const PlschOptions& options) {
  inst.validate();
  PlschModel model;
  detail::add_action_vars(model, inst);
  detail::add_start_vars(model, inst, options);
  detail::add_schedule_rows(model, inst, options);
  detail::set_occupation_objective(model, inst);
  return model;
}

DefenseSchedule extract_schedule(const PlschInstance& inst, const PlschModel& model,
                                 const milp::Solution& sol) {
  if (sol.status != milp::SolveStatus::Optimal)
    throw ScheduleError("cannot extract a schedule from a " +
                        std::string(milp::to_string(sol.status)) + " solution");
  DefenseSchedule s;
  for (int t = 0; t <= inst.horizon; ++t)
    if (sol.value(model.action[t])) s.action_times.push_back(t);
  for (int m = 0; m < inst.machines(); ++m)
    for (int j = 0; j < static_cast<int>(model.start[m].size()); ++j)
      for (int t = 0; t <= inst.horizon; ++t)
        if (auto v = model.y(m, j, t); v && sol.value(*v)) s.job_starts[{m, j}] = t;
  s.objective = boost::rational_cast<long long>(sol.objective_value);
  return s;
}

long long occupied_time(const PlschInstance& inst, const DefenseSchedule& schedule) {
  long long total = 0;
  for (const auto& [ref, t] : schedule.job_starts)
    total += inst.scenarios.at(ref.machine).jobs.at(ref.job).duration;
  return total;
}

std::optional<std::string> validate_schedule(const PlschInstance& inst,
                                             const DefenseSchedule& schedule) {
  const auto& acts = schedule.action_times;
  if (static_cast<int>(acts.size()) > inst.budget) return "more actions than budget";
  if (!std::is_sorted(acts.begin(), acts.end()) ||
      std::adjacent_find(acts.begin(), acts.end()) != acts.end())
    return "action times not strictly increasing";
  for (int t : acts)
    if (t < 0 || t > inst.horizon) return "action time outside horizon";
  std::set<int> action_set(acts.begin(), acts.end());
  std::set<int> used;
  for (const auto& [ref, t] : schedule.job_starts) {
    if (ref.machine < 0 || ref.machine >= inst.machines()) return "unknown machine";
    const auto& jobs = inst.scenarios[ref.machine].jobs;
    if (ref.job < 0 || ref.job >= static_cast<int>(jobs.size())) return "unknown job";
    if (!action_set.contains(t)) return "job starts without an action";
    if (t + jobs[ref.job].duration > inst.horizon) return "job overruns the horizon";
    if (ref.job > 0) {
      auto prev = schedule.job_starts.find({ref.machine, ref.job - 1});
      if (prev == schedule.job_starts.end()) return "job scheduled before its predecessor";
      if (prev->second + jobs[ref.job - 1].duration > t) return "consecutive jobs overlap";
    }
    used.insert(t);
  }
  if (used.size() != action_set.size()) return "action that starts no job";
  if (occupied_time(inst, schedule) != schedule.objective) return "objective mismatch";
  return std::nullopt;
}

}  // namespace mtd
