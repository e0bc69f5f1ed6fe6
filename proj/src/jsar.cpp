#include "mtd/jsar.hpp"

#include <algorithm>
#include <map>

namespace mtd {

using milp::LinearConstraint;
using milp::Sense;
using milp::Term;
using milp::VarId;

JsarModel build_jsar(const Network& net, const ServiceOverlay& overlay, const PathCatalog& paths) {
  net.validate();
  overlay.validate();
  for (int u = 0; u < net.size(); ++u)
    for (int v = u + 1; v < net.size(); ++v)
      if (paths.between(u, v).empty())
        throw NetworkError("path catalog has no path for pair (" + std::to_string(u) + ", " +
                           std::to_string(v) + ")");

  JsarModel model;
  auto& prog = model.program;
  const int S = static_cast<int>(overlay.services.size());
  const int V = net.size();
  const int D = static_cast<int>(overlay.demands.size());
  const int P = static_cast<int>(paths.paths.size());

  model.host.assign(S, std::vector<std::optional<VarId>>(V));
  for (int s = 0; s < S; ++s)
    for (int v = 0; v < V; ++v)
      if (net.capable(v, s))
        model.host[s][v] = prog.add_var("q_" + std::to_string(s) + "_" + std::to_string(v));

  // both_at[d][(u, v)] = q_{s,u} * q_{t,v} for demand d = (s, t).
  std::vector<std::map<std::pair<int, int>, VarId>> both_at(D);
  for (int d = 0; d < D; ++d) {
    const auto& dem = overlay.demands[d];
    for (int u = 0; u < V; ++u) {
      for (int v = 0; v < V; ++v) {
        if (u == v) continue;
        const auto& qs = model.host[dem.s][u];
        const auto& qt = model.host[dem.t][v];
        if (!qs || !qt) continue;
        both_at[d][{u, v}] = prog.linearize_product(
            *qs, *qt, "pq_" + std::to_string(d) + "_" + std::to_string(u) + "_" + std::to_string(v));
      }
    }
  }

  model.route.resize(D);
  for (int d = 0; d < D; ++d)
    for (int p = 0; p < P; ++p)
      model.route[d].push_back(prog.add_var("z_" + std::to_string(d) + "_" + std::to_string(p)));

  for (int v = 0; v < V; ++v) {
    std::vector<Term> terms;
    for (int s = 0; s < S; ++s)
      if (model.host[s][v]) terms.push_back({overlay.services[s].demand, *model.host[s][v]});
    if (!terms.empty())
      prog.add_constraint({terms, Sense::LessEqual, net.nodes[v].capacity, "node_capacity"});
  }
  for (int s = 0; s < S; ++s) {
    std::vector<Term> terms;
    for (int v = 0; v < V; ++v)
      if (model.host[s][v]) terms.push_back({1, *model.host[s][v]});
    prog.add_constraint({terms, Sense::Equal, 1, "single_host"});
  }
  for (int d = 0; d < D; ++d) {
    for (const auto& [pair, ids] : paths.by_pair) {
      auto [u, v] = pair;
      std::vector<Term> rhs_terms;
      if (auto it = both_at[d].find({v, u}); it != both_at[d].end())
        rhs_terms.push_back({-1, it->second});
      if (auto it = both_at[d].find({u, v}); it != both_at[d].end())
        rhs_terms.push_back({-1, it->second});
      for (int p : ids) {
        std::vector<Term> terms{{1, model.route[d][p]}};
        terms.insert(terms.end(), rhs_terms.begin(), rhs_terms.end());
        prog.add_constraint({terms, Sense::LessEqual, 0, "path_endpoints"});
      }
    }
  }
  std::vector<std::vector<int>> paths_on_link(net.links.size());
  for (int p = 0; p < P; ++p)
    for (int l : paths.paths[p].links) paths_on_link[l].push_back(p);
  for (const auto& link : net.links) {
    std::vector<Term> terms;
    for (int d = 0; d < D; ++d)
      for (int p : paths_on_link[link.id])
        terms.push_back({overlay.demands[d].rate, model.route[d][p]});
    if (!terms.empty())
      prog.add_constraint({terms, Sense::LessEqual, link.capacity, "link_capacity"});
  }
  for (int d = 0; d < D; ++d)
    for (int p = 0; p < P; ++p)
      prog.add_constraint({{{paths.paths[p].latency, model.route[d][p]}},
                           Sense::LessEqual,
                           overlay.demands[d].latency_bound,
                           "latency"});
  for (int d = 0; d < D; ++d) {
    std::vector<Term> terms;
    for (int p = 0; p < P; ++p) terms.push_back({1, model.route[d][p]});
    prog.add_constraint({terms, Sense::Equal, 1, "single_path"});
  }

  std::vector<Term> obj;
  for (int d = 0; d < D; ++d)
    for (int p = 0; p < P; ++p) obj.push_back({paths.paths[p].hops(), model.route[d][p]});
  prog.set_objective(milp::ObjectiveSense::Minimize, std::move(obj));
  return model;
}

Configuration extract_configuration(const JsarModel& model, const PathCatalog& paths,
                                    const milp::Solution& sol) {
  if (!sol.has_assignment()) throw NetworkError("solution carries no assignment");
  Configuration c;
  for (const auto& row : model.host) {
    int node = -1;
    for (int v = 0; v < static_cast<int>(row.size()); ++v)
      if (row[v] && sol.value(*row[v])) node = v;
    c.placement.push_back(node);
  }
  for (const auto& row : model.route) {
    int path = -1;
    for (int p = 0; p < static_cast<int>(row.size()); ++p)
      if (sol.value(row[p])) path = p;
    c.routing.push_back(path);
    if (path >= 0) c.objective += paths.paths[path].hops();
  }
  return c;
}

std::optional<std::string> validate_configuration(const Network& net,
                                                  const ServiceOverlay& overlay,
                                                  const PathCatalog& paths,
                                                  const Configuration& config) {
  const int S = static_cast<int>(overlay.services.size());
  const int D = static_cast<int>(overlay.demands.size());
  if (static_cast<int>(config.placement.size()) != S) return "placement size mismatch";
  if (static_cast<int>(config.routing.size()) != D) return "routing size mismatch";
  std::vector<long long> load(net.nodes.size(), 0);
  for (int s = 0; s < S; ++s) {
    int v = config.placement[s];
    if (v < 0 || v >= net.size()) return "service " + std::to_string(s) + " not placed";
    if (!net.capable(v, s)) return "service " + std::to_string(s) + " on incapable node";
    load[v] += overlay.services[s].demand;
  }
  for (int v = 0; v < net.size(); ++v)
    if (load[v] > net.nodes[v].capacity) return "node " + std::to_string(v) + " over capacity";
  std::vector<long long> traffic(net.links.size(), 0);
  long long hops = 0;
  for (int d = 0; d < D; ++d) {
    const auto& dem = overlay.demands[d];
    int p = config.routing[d];
    if (p < 0 || p >= static_cast<int>(paths.paths.size()))
      return "demand " + std::to_string(d) + " not routed";
    const auto& path = paths.paths[p];
    auto ends = std::minmax(path.nodes.front(), path.nodes.back());
    auto hosts = std::minmax(config.placement[dem.s], config.placement[dem.t]);
    if (ends != hosts) return "demand " + std::to_string(d) + " path does not join its services";
    if (path.latency > dem.latency_bound)
      return "demand " + std::to_string(d) + " exceeds its latency bound";
    for (int l : path.links) traffic[l] += dem.rate;
    hops += path.hops();
  }
  for (const auto& l : net.links)
    if (traffic[l.id] > l.capacity) return "link " + std::to_string(l.id) + " over capacity";
  if (hops != config.objective) return "objective mismatch";
  return std::nullopt;
}

Pool generate_pool(const Network& net, const ServiceOverlay& overlay, const PathCatalog& paths,
                   int count, const milp::SolveLimits& limits) {
  if (count < 1) throw NetworkError("pool count must be >= 1");
  JsarModel model = build_jsar(net, overlay, paths);
  Pool pool;
  while (static_cast<int>(pool.configs.size()) < count) {
    milp::Solution sol = milp::solve(model.program, limits);
    pool.last_status = sol.status;
    if (sol.status == milp::SolveStatus::Infeasible) {
      pool.exhausted = true;
      pool.report = pool.configs.empty() ? "placement and routing model is infeasible"
                                         : "feasible configurations exhausted after " +
                                               std::to_string(pool.configs.size());
      break;
    }
    if (sol.status == milp::SolveStatus::BudgetExceeded) {
      pool.report = "solver budget exceeded after " + std::to_string(pool.configs.size()) +
                    " configurations";
      break;
    }
    pool.configs.push_back(extract_configuration(model, paths, sol));

    // No-good cut: given one host per service and one path per demand, the
    // incidence vector repeats exactly when all of its ones repeat.
    std::vector<Term> ones;
    for (const auto& row : model.host)
      for (const auto& q : row)
        if (q && sol.value(*q)) ones.push_back({1, *q});
    for (const auto& row : model.route)
      for (const auto& z : row)
        if (sol.value(z)) ones.push_back({1, z});
    const auto n = static_cast<std::int64_t>(ones.size());
    model.program.add_constraint({std::move(ones), Sense::LessEqual, n - 1, "no_good"});
  }
  return pool;
}

int changed_components(const Configuration& c, const Configuration& e) {
  if (c.placement.size() != e.placement.size() || c.routing.size() != e.routing.size())
    throw NetworkError("configurations belong to different overlays");
  int changed = 0;
  for (std::size_t s = 0; s < c.placement.size(); ++s) changed += c.placement[s] != e.placement[s];
  for (std::size_t d = 0; d < c.routing.size(); ++d) changed += c.routing[d] != e.routing[d];
  return changed;
}

double distance(const Configuration& c, const Configuration& e) {
  int changed = changed_components(c, e);
  auto total = c.placement.size() + c.routing.size();
  if (total == 0) return 0.0;
  // Each move flips two incidence entries; the raw sum is normalised by 2(|S|+|D|).
  return static_cast<double>(2 * changed) / static_cast<double>(2 * total);
}

int EligibilityMatrix::eligible_pairs() const {
  int n = 0;
  for (int c = 0; c < size(); ++c)
    for (int e = c + 1; e < size(); ++e) n += alpha[c][e];
  return n;
}

EligibilityMatrix eligibility_matrix(const std::vector<Configuration>& pool, double kappa) {
  EligibilityMatrix m;
  m.kappa = kappa;
  const int n = static_cast<int>(pool.size());
  m.alpha.assign(n, std::vector<bool>(n, false));
  for (int c = 0; c < n; ++c)
    for (int e = c + 1; e < n; ++e) {
      bool ok = distance(pool[c], pool[e]) > kappa;
      m.alpha[c][e] = m.alpha[e][c] = ok;
    }
  return m;
}

}  // namespace mtd
