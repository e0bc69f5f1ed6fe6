#include "mtd/scenario.hpp"

#include <cmath>
#include <numeric>

namespace mtd {

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Long: return "long";
    case AttackKind::Medium: return "medium";
    case AttackKind::Short: return "short";
  }
  return "?";
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Calibrated: return "calibrated";
    case ScenarioKind::LateralMovement: return "lateral";
    case ScenarioKind::Ransomware: return "ransomware";
    case ScenarioKind::ZeroDay: return "zeroday";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view s) {
  if (s == "long") return AttackKind::Long;
  if (s == "medium") return AttackKind::Medium;
  if (s == "short") return AttackKind::Short;
  throw ScenarioError("unknown attack kind '" + std::string(s) + "'");
}

ScenarioKind parse_scenario_kind(std::string_view s) {
  if (s == "calibrated") return ScenarioKind::Calibrated;
  if (s == "lateral" || s == "lateral_movement") return ScenarioKind::LateralMovement;
  if (s == "ransomware") return ScenarioKind::Ransomware;
  if (s == "zeroday" || s == "zero_day") return ScenarioKind::ZeroDay;
  throw ScenarioError("unknown scenario kind '" + std::string(s) + "'");
}

int AttackScenario::total_duration() const {
  return std::accumulate(jobs.begin(), jobs.end(), 0,
                         [](int acc, const AttackJob& j) { return acc + j.duration; });
}

void TimingParams::validate() const {
  if (horizon < 1) throw ScenarioError("horizon must be >= 1");
  if (attack_scale < 1) throw ScenarioError("attack scale must be >= 1");
}

DurationRange duration_range(AttackKind k) {
  switch (k) {
    case AttackKind::Long: return {0.1, 0.3};
    case AttackKind::Medium: return {0.05, 0.15};
    case AttackKind::Short: return {0.0025, 0.075};
  }
  return {0, 0};
}

AttackJob sample_attack(AttackKind kind, const TimingParams& params, Rng& rng) {
  auto [lo, hi] = duration_range(kind);
  double scale = params.attack_scale;
  double x = rng.uniform(lo * scale, hi * scale);
  int d = static_cast<int>(std::lround(x));
  return {kind, std::max(d, 1), 0};
}

namespace {

class Builder {
 public:
  Builder(ScenarioKind kind, const TimingParams& params, Rng& rng)
      : params_(params), rng_(rng) {
    scenario_.kind = kind;
  }

  // Mandatory step: must fit.
  void require(AttackJob job) {
    if (!try_push(job)) {
      throw ScenarioError(std::string(to_string(scenario_.kind)) + " scenario needs a " +
                          std::string(to_string(job.kind)) + " attack of duration " +
                          std::to_string(job.duration) + " but only " +
                          std::to_string(params_.horizon - total_) +
                          " time units remain in horizon " + std::to_string(params_.horizon));
    }
  }

  bool try_push(AttackJob job) {
    if (total_ + job.duration > params_.horizon) return false;
    total_ += job.duration;
    job.index = static_cast<int>(scenario_.jobs.size()) + 1;
    scenario_.jobs.push_back(job);
    return true;
  }

  AttackJob sample(AttackKind k) { return sample_attack(k, params_, rng_); }

  AttackKind pick(std::initializer_list<AttackKind> kinds) {
    auto i = rng_.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1);
    return *(kinds.begin() + i);
  }

  Rng& rng() { return rng_; }
  AttackScenario take() { return std::move(scenario_); }

 private:
  const TimingParams& params_;
  Rng& rng_;
  AttackScenario scenario_;
  int total_ = 0;
};

}  // namespace

AttackScenario compose_scenario(ScenarioKind kind, const TimingParams& params, Rng& rng) {
  params.validate();
  Builder b(kind, params, rng);
  using enum AttackKind;
  switch (kind) {
    case ScenarioKind::Calibrated:
      b.require(b.sample(Long));
      while (b.try_push(b.sample(b.pick({Medium, Short})))) {
      }
      break;
    case ScenarioKind::LateralMovement: {
      b.require(b.sample(Long));
      bool open = true;
      while (open) {
        auto shorts = b.rng().uniform_int(1, 3);
        for (std::int64_t i = 0; i < shorts && open; ++i) open = b.try_push(b.sample(Short));
        if (open) open = b.try_push(b.sample(Medium));
      }
      break;
    }
    case ScenarioKind::Ransomware: {
      AttackJob penetration = b.sample(Medium);
      b.require(penetration);
      int longest = std::max(
          1, static_cast<int>(std::lround(duration_range(Long).hi * params.attack_scale)));
      if (longest <= penetration.duration)
        throw ScenarioError("attack scale " + std::to_string(params.attack_scale) +
                            " too small for a discovery step longer than penetration");
      AttackJob discovery = b.sample(Long);
      while (discovery.duration <= penetration.duration) discovery = b.sample(Long);
      b.require(discovery);
      while (b.try_push(b.sample(Short))) {
      }
      break;
    }
    case ScenarioKind::ZeroDay:
      while (b.try_push(b.sample(b.pick({Long, Medium, Short})))) {
      }
      break;
  }
  return b.take();
}

std::vector<AttackScenario> generate_scenario_set(std::span<const ScenarioKind> kinds,
                                                  int per_kind, const TimingParams& params) {
  if (per_kind < 1) throw ScenarioError("per_kind must be >= 1");
  params.validate();
  std::vector<AttackScenario> out;
  int machine = 0;
  for (ScenarioKind kind : kinds) {
    for (int i = 0; i < per_kind; ++i, ++machine) {
      Rng rng(derive_seed(params.seed, stream::kScenario, static_cast<std::uint64_t>(machine)));
      AttackScenario s = compose_scenario(kind, params, rng);
      s.machine_id = machine;
      out.push_back(std::move(s));
    }
  }
  return out;
}

bool matches_template(const AttackScenario& s) {
  using enum AttackKind;
  const auto& j = s.jobs;
  auto all_of_from = [&](std::size_t from, auto pred) {
    for (std::size_t i = from; i < j.size(); ++i)
      if (!pred(j[i].kind)) return false;
    return true;
  };
  switch (s.kind) {
    case ScenarioKind::Calibrated:
      return !j.empty() && j[0].kind == Long &&
             all_of_from(1, [](AttackKind k) { return k != Long; });
    case ScenarioKind::LateralMovement: {
      if (j.empty() || j[0].kind != Long) return false;
      // Blocks of 1..3 shorts, each followed by a medium; the tail may be cut.
      int run = 0;
      for (std::size_t i = 1; i < j.size(); ++i) {
        if (j[i].kind == Short) {
          if (++run > 3) return false;
        } else if (j[i].kind == Medium) {
          if (run == 0) return false;
          run = 0;
        } else {
          return false;
        }
      }
      return true;
    }
    case ScenarioKind::Ransomware:
      return j.size() >= 2 && j[0].kind == Medium && j[1].kind == Long &&
             j[1].duration > j[0].duration &&
             all_of_from(2, [](AttackKind k) { return k == Short; });
    case ScenarioKind::ZeroDay:
      return true;
  }
  return false;
}

}  // namespace mtd
