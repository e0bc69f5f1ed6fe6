#include "mtd/metrics.hpp"

#include <stdexcept>

namespace mtd {

double poec(const std::vector<Configuration>& pool, double kappa) {
  const auto n = pool.size();
  if (n < 2) throw std::invalid_argument("poec needs at least two configurations");
  std::size_t over = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t e = c + 1; e < n; ++e) over += distance(pool[c], pool[e]) > kappa;
  return static_cast<double>(over) / static_cast<double>(n * (n - 1) / 2);
}

std::vector<RetentionTerm> retention_terms(const MtdPlan& plan,
                                           const std::vector<Configuration>& pool) {
  std::vector<RetentionTerm> out;
  const int* prev = nullptr;
  for (const auto& [t, c] : plan.config_at) {
    if (prev) {
      double d = distance(pool.at(*prev), pool.at(c));
      out.push_back({*prev, c, d, 1.0 - d});
    }
    prev = &c;
  }
  return out;
}

std::optional<double> por(const MtdPlan& plan, const std::vector<Configuration>& pool) {
  auto terms = retention_terms(plan, pool);
  if (terms.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& t : terms) sum += t.retained;
  return sum / static_cast<double>(terms.size());
}

double act(const DefenseSchedule& schedule, const PlschInstance& inst) {
  if (inst.machines() == 0 || inst.horizon <= 0)
    throw std::invalid_argument("act needs at least one machine and a positive horizon");
  const double total = static_cast<double>(inst.horizon) * inst.machines();
  return 1.0 - static_cast<double>(occupied_time(inst, schedule)) / total;
}

MetricReport evaluate(const MtdInstance& inst, const MtdPlan& plan) {
  MetricReport r;
  if (inst.pool.size() >= 2) r.poec = poec(inst.pool, inst.eligibility.kappa);
  r.por = por(plan, inst.pool);
  r.act = act(plan.schedule, inst.plsch);
  return r;
}

}  // namespace mtd
