#pragma once

// Evaluation metrics: share of sufficiently different configuration pairs,
// retention across reconfigurations, and attacker capture time.

#include <optional>
#include <string>
#include <vector>

#include "mtd/plsch_mtd.hpp"

namespace mtd {

/// Fraction of unordered pool pairs whose distance exceeds kappa.
/// Throws std::invalid_argument for pools smaller than 2.
double poec(const std::vector<Configuration>& pool, double kappa);

struct RetentionTerm {
  int from = 0;  // pool indices, in action-time order
  int to = 0;
  double distance = 0.0;
  double retained = 0.0;  // 1 - distance
};

/// One term per consecutive pair of deployed configurations.
std::vector<RetentionTerm> retention_terms(const MtdPlan& plan,
                                           const std::vector<Configuration>& pool);

/// Mean retained fraction; absent with fewer than two deployed configurations.
std::optional<double> por(const MtdPlan& plan, const std::vector<Configuration>& pool);

/// Idle (attacker-held) share of machine time, leading and trailing gaps
/// included: 1 - occupied / (T * |M|).
double act(const DefenseSchedule& schedule, const PlschInstance& inst);

struct MetricReport {
  std::optional<double> poec;
  std::optional<double> por;
  double act = 1.0;
  /// Artifact paths the numbers were computed from.
  std::string pool_ref;
  std::string plan_ref;
  std::string scenarios_ref;
};

MetricReport evaluate(const MtdInstance& inst, const MtdPlan& plan);

}  // namespace mtd
