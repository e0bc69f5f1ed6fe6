#pragma once

// Attack scenarios: ordered attack steps with integer time-to-success.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtd/rng.hpp"

namespace mtd {

enum class AttackKind { Long, Medium, Short };
enum class ScenarioKind { Calibrated, LateralMovement, Ransomware, ZeroDay };

inline constexpr ScenarioKind kAllScenarioKinds[] = {
    ScenarioKind::Calibrated, ScenarioKind::LateralMovement, ScenarioKind::Ransomware,
    ScenarioKind::ZeroDay};

std::string_view to_string(AttackKind k);
std::string_view to_string(ScenarioKind k);
AttackKind parse_attack_kind(std::string_view s);
/// Accepts "calibrated", "lateral" / "lateral_movement", "ransomware",
/// "zeroday" / "zero_day".
ScenarioKind parse_scenario_kind(std::string_view s);

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AttackJob {
  AttackKind kind = AttackKind::Short;
  int duration = 1;
  int index = 1;  // 1-based position in its scenario
  bool operator==(const AttackJob&) const = default;
};

struct AttackScenario {
  ScenarioKind kind = ScenarioKind::ZeroDay;
  int machine_id = 0;
  std::vector<AttackJob> jobs;

  int total_duration() const;
  bool operator==(const AttackScenario&) const = default;
};

struct TimingParams {
  int horizon = 60;       // T
  int attack_scale = 60;  // Lambda
  std::uint64_t seed = 0;

  void validate() const;
};

/// Sampling interval of an attack kind as fractions of the attack scale.
struct DurationRange {
  double lo;
  double hi;
};
DurationRange duration_range(AttackKind k);

AttackJob sample_attack(AttackKind kind, const TimingParams& params, Rng& rng);

/// Appends attacks following the scenario template until the next sampled
/// attack would push the total past the horizon. Throws ScenarioError if the
/// mandatory leading attacks do not fit.
AttackScenario compose_scenario(ScenarioKind kind, const TimingParams& params, Rng& rng);

/// Scenario for machine m draws from derive_seed(params.seed, kScenario, m).
std::vector<AttackScenario> generate_scenario_set(std::span<const ScenarioKind> kinds,
                                                  int per_kind, const TimingParams& params);

/// True if the kind sequence of `s` matches its template.
bool matches_template(const AttackScenario& s);

}  // namespace mtd
