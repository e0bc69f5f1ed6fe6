#pragma once

// Seeded end-to-end experiment runs: instance -> pool -> scenarios ->
// composite schedule -> metrics, one CSV row per (seed, budget, kappa).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtd/json_io.hpp"

namespace mtd {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  // topology
  int n_nodes = 8;
  double connectivity = 1.7;  // |E| / |V|
  double capability_density = 1.0;
  NetworkRanges network_ranges;
  // overlay
  int n_services = 5;
  int n_demands = 6;
  OverlayRanges overlay_ranges;
  // timing
  int horizon = 20;
  int attack_scale = 20;
  // defense; one sweep point per (budget, kappa)
  std::vector<int> budgets{4};
  std::vector<double> kappas{0.15};
  /// 0 means budget + pool_extra for each budget.
  int pool_size = 0;
  int pool_extra = 2;
  int path_k = 5;
  // scenarios: either explicit kinds (per_kind machines each) or, when
  // `mixed`, per_kind machines whose kinds are drawn uniformly per seed
  bool mixed = true;
  std::vector<ScenarioKind> kinds;
  int per_kind = 2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  // solver
  double time_budget_seconds = 300.0;
  std::uint64_t max_nodes = 0;  // 0: unlimited
  bool preprocess = true;
  int workers = 1;

  void validate() const;
  int pool_size_for(int budget) const { return pool_size > 0 ? pool_size : budget + pool_extra; }
  /// "mixed" or kinds joined by '+'.
  std::string kinds_label() const;
};

ExperimentConfig preset(const std::string& name);  // "desk" or "full"

/// Applies one key=value setting. Throws ConfigError naming the key.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// `key = value` lines, '#' comments. A `preset` key, if present, is applied
/// first regardless of its position.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& cfg);

struct RunRow {
  std::uint64_t seed = 0;
  std::string scenario_kinds;
  int horizon = 0;
  int attack_scale = 0;
  int budget = 0;
  double kappa = 0.0;
  int pool_size = 0;
  std::optional<double> poec;
  std::optional<double> por;
  std::optional<double> act;
  std::string status;  // optimal | infeasible | budget_exceeded | config_starved
  double seconds = 0.0;

  // Not in the CSV; kept for in-process checks.
  long long objective = -1;
  std::vector<RetentionTerm> retention;
  std::vector<std::pair<int, int>> bound_pairs;
  std::vector<int> bound_pair_changes;  // changed components per bound pair
  int components = 0;  // |S| + |D|
};

struct RunResult {
  std::vector<RunRow> rows;  // ordered by seed, then budget, then kappa
};

/// Runs every seed and sweep point. Artifacts go under `run_dir` when it is
/// non-empty; the CSV is written as run_dir/results.csv.
RunResult run(const ExperimentConfig& cfg, const std::filesystem::path& run_dir = {});

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const RunResult& result);
/// Mean and 95% confidence half-width over seeds per (kinds, budget, kappa).
void write_summary_tsv(std::ostream& os, const RunResult& result);

/// Mean and Student-t 95% half-width; half-width is 0 for fewer than two values.
std::pair<double, double> mean_ci95(const std::vector<double>& values);

}  // namespace mtd
