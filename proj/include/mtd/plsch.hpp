#pragma once

// Time-indexed defender scheduling: machines are attack scenarios, jobs are
// attacks, and a limited number of global starting actions (the defender's
// moves) open the slots in which jobs may begin.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mtd/milp.hpp"
#include "mtd/scenario.hpp"

namespace mtd {

struct PlschInstance {
  std::vector<AttackScenario> scenarios;
  int horizon = 60;  // T; time grid is {0, ..., T}
  int budget = 12;   // beta

  void validate() const;
  int machines() const { return static_cast<int>(scenarios.size()); }
};

struct JobRef {
  int machine = 0;
  int job = 0;  // 0-based
  auto operator<=>(const JobRef&) const = default;
};

struct DefenseSchedule {
  std::vector<int> action_times;       // sorted
  std::map<JobRef, int> job_starts;    // scheduled jobs only
  long long objective = 0;             // sum of scheduled durations
};

struct PlschOptions {
  /// Drop start variables that cannot be part of any feasible schedule
  /// (job overruns the horizon, predecessors cannot have finished, job index
  /// exceeds the budget) and rows that are vacuous as a result.
  bool preprocess = true;
};

/// Handles into a built scheduling model.
struct PlschModel {
  milp::BinaryProgram program;
  std::vector<milp::VarId> action;  // x_t, t = 0..T
  /// start[m][j][t] is y_mjt, absent when eliminated by preprocessing.
  std::vector<std::vector<std::vector<std::optional<milp::VarId>>>> start;

  const std::optional<milp::VarId>& y(int m, int j, int t) const { return start[m][j][t]; }
};

PlschModel build_plsch(const PlschInstance& inst, const PlschOptions& options = {});

namespace detail {
// Building blocks shared with the composite model, which interleaves its own
// variables between them.
void add_action_vars(PlschModel& model, const PlschInstance& inst);
void add_start_vars(PlschModel& model, const PlschInstance& inst, const PlschOptions& options);
void add_schedule_rows(PlschModel& model, const PlschInstance& inst, const PlschOptions& options);
void set_occupation_objective(PlschModel& model, const PlschInstance& inst);
}  // namespace detail

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads actions and job starts off an optimal solution.
DefenseSchedule extract_schedule(const PlschInstance& inst, const PlschModel& model,
                                 const milp::Solution& sol);

/// Independent check of a schedule: budget, starts on actions, order,
/// non-overlap, horizon, objective bookkeeping. Returns the first violation.
std::optional<std::string> validate_schedule(const PlschInstance& inst,
                                             const DefenseSchedule& schedule);

/// Sum of durations of the scheduled jobs.
long long occupied_time(const PlschInstance& inst, const DefenseSchedule& schedule);

}  // namespace mtd
