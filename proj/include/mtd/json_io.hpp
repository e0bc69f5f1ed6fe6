#pragma once

// JSON interchange documents passed between pipeline stages.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtd/metrics.hpp"

namespace mtd::io {

using nlohmann::json;

/// Malformed input. The message names the source and either the byte offset
/// of a syntax error or the JSON pointer of the offending value.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json parse(const std::string& text, const std::string& source);
json read_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; creates parent directories.
void write_file(const std::filesystem::path& path, const json& doc);

struct ScenarioDoc {
  int horizon = 0;
  int attack_scale = 0;
  std::uint64_t seed = 0;
  std::vector<AttackScenario> scenarios;
};

struct InstanceDoc {
  std::uint64_t seed = 0;
  NetworkRanges network_ranges;
  OverlayRanges overlay_ranges;
  Network network;
  ServiceOverlay overlay;
};

struct PoolDoc {
  std::uint64_t seed = 0;
  NetworkRanges network_ranges;
  OverlayRanges overlay_ranges;
  int path_k = 0;
  PathCatalog paths;
  std::vector<Configuration> configurations;
  std::string status;
  bool exhausted = false;
  std::string report;
  std::string instance_ref;
};

struct PlanDoc {
  int horizon = 0;
  int budget = 0;
  MtdPlan plan;
  double kappa = 0.0;
  std::string pool_ref;
};

json to_json(const ScenarioDoc& doc);
json to_json(const InstanceDoc& doc);
json to_json(const PoolDoc& doc);
json schedule_to_json(const DefenseSchedule& s, int horizon, int budget);
json to_json(const PlanDoc& doc);
json to_json(const MetricReport& r);

// `source` prefixes error messages (usually the file name).
ScenarioDoc scenarios_from_json(const json& j, const std::string& source);
InstanceDoc instance_from_json(const json& j, const std::string& source);
PoolDoc pool_from_json(const json& j, const std::string& source);
DefenseSchedule schedule_from_json(const json& j, const std::string& source, int* horizon = nullptr,
                                   int* budget = nullptr);
PlanDoc plan_from_json(const json& j, const std::string& source);

}  // namespace mtd::io
