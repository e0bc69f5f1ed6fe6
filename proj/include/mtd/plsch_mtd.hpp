#pragma once

// Scheduling with configuration assignment: every defender action deploys a
// configuration from the pool, no configuration is reused, and the
// configurations under which consecutive attacks on a machine start must be
// far enough apart.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mtd/jsar.hpp"
#include "mtd/plsch.hpp"

namespace mtd {

struct MtdInstance {
  PlschInstance plsch;
  std::vector<Configuration> pool;
  EligibilityMatrix eligibility;

  void validate() const;
};

struct MtdPlan {
  DefenseSchedule schedule;
  std::map<int, int> config_at;  // action time -> pool index
  /// Fewer pool configurations than budgeted actions.
  bool config_starved = false;
};

struct MtdModel {
  PlschModel plsch;
  /// assign[c][t] is a_ct.
  std::vector<std::vector<milp::VarId>> assign;
  /// Linearised a_ct * a_ef keyed by (c, t, e, f).
  std::map<std::tuple<int, int, int, int>, milp::VarId> pair;
};

MtdModel build_composite(const MtdInstance& inst, const PlschOptions& options = {});

/// Throws ScheduleError on a non-optimal solution and std::logic_error when
/// the extracted plan violates a plan invariant.
MtdPlan extract_plan(const MtdInstance& inst, const MtdModel& model, const milp::Solution& sol);

/// Independent plan check: schedule validity, configurations only at action
/// times, no reuse, eligible configurations across consecutive jobs.
std::optional<std::string> validate_plan(const MtdInstance& inst, const MtdPlan& plan);

/// Configuration pairs the plan binds through consecutive jobs on some
/// machine, as (config at earlier job, config at later job), deduplicated.
std::vector<std::pair<int, int>> bound_pairs(const MtdInstance& inst, const MtdPlan& plan);

/// Whether the undirected eligibility graph has a simple path with at least
/// `edges` edges.
bool has_eligible_path(const EligibilityMatrix& alpha, int edges);

}  // namespace mtd
