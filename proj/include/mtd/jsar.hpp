#pragma once

// Joint service allocation and routing: networks, service overlays,
// candidate paths, the placement/routing model, configuration pools and the
// inter-configuration distance.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtd/milp.hpp"
#include "mtd/rng.hpp"

namespace mtd {

class NetworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct IntRange {
  int lo = 1;
  int hi = 1;
  int sample(Rng& rng) const { return static_cast<int>(rng.uniform_int(lo, hi)); }
  bool operator==(const IntRange&) const = default;
};

struct NetworkRanges {
  IntRange node_capacity{6, 10};
  IntRange link_capacity{10, 20};
  IntRange link_latency{1, 3};
  bool operator==(const NetworkRanges&) const = default;
};

struct OverlayRanges {
  IntRange service_demand{1, 3};
  IntRange demand_rate{1, 4};
  IntRange latency_bound{8, 14};
  bool operator==(const OverlayRanges&) const = default;
};

struct Node {
  int id = 0;
  int capacity = 1;          // r_v
  std::vector<bool> capable;  // o_sv per service; empty means every service
};

struct Link {
  int id = 0;
  int u = 0;
  int v = 0;
  int capacity = 1;  // c_e
  int latency = 1;   // l_e
};

struct Network {
  std::vector<Node> nodes;
  std::vector<Link> links;

  int size() const { return static_cast<int>(nodes.size()); }
  bool capable(int node, int service) const;
  bool connected() const;
  /// Throws NetworkError on non-positive values, bad endpoints, parallel
  /// links, self-loops or a disconnected graph.
  void validate() const;
};

struct Service {
  int id = 0;
  int demand = 1;  // tau_s
};

struct Demand {
  int id = 0;
  int s = 0;  // service ids
  int t = 1;
  int rate = 1;           // h_d
  int latency_bound = 1;  // l_d
};

struct ServiceOverlay {
  std::vector<Service> services;
  std::vector<Demand> demands;

  void validate() const;
};

/// A random labelled spanning tree (uniform via a Pruefer sequence) plus
/// distinct random extra links; |E| = round(connectivity * n_nodes).
Network generate_topology(int n_nodes, double connectivity, Rng& rng,
                          const NetworkRanges& ranges = {});

/// Restrict service capabilities: each (node, service) is capable with
/// probability `density`; every service keeps at least one capable node.
void assign_capabilities(Network& net, int n_services, double density, Rng& rng);

/// Demands over distinct unordered service pairs.
ServiceOverlay generate_overlay(int n_services, int n_demands, Rng& rng,
                                const OverlayRanges& ranges = {});

struct Path {
  std::vector<int> nodes;
  std::vector<int> links;
  int latency = 0;

  int hops() const { return static_cast<int>(links.size()); }
  bool operator==(const Path&) const = default;
};

/// Candidate paths for every unordered node pair, ordered by hop count, then
/// latency, then node sequence. Path ids index `paths`.
struct PathCatalog {
  std::vector<Path> paths;
  std::map<std::pair<int, int>, std::vector<int>> by_pair;  // key (u, v) with u < v

  const std::vector<int>& between(int u, int v) const;
};

/// k shortest simple paths per pair (Yen's algorithm over a total order).
PathCatalog enumerate_paths(const Network& net, int k);

/// One placement/routing solution.
struct Configuration {
  std::vector<int> placement;  // node per service
  std::vector<int> routing;    // catalog path id per demand
  long long objective = 0;     // total hop count

  bool operator==(const Configuration&) const = default;
};

struct JsarModel {
  milp::BinaryProgram program;
  /// host[s][v] is q_sv; absent where node v cannot host s.
  std::vector<std::vector<std::optional<milp::VarId>>> host;
  /// route[d][p] is z_dp over every catalog path.
  std::vector<std::vector<milp::VarId>> route;
};

JsarModel build_jsar(const Network& net, const ServiceOverlay& overlay, const PathCatalog& paths);

Configuration extract_configuration(const JsarModel& model, const PathCatalog& paths,
                                    const milp::Solution& sol);

/// Direct check of capacity, capability, endpoint, link-capacity, latency
/// and single-path rules. Returns the first violation.
std::optional<std::string> validate_configuration(const Network& net,
                                                  const ServiceOverlay& overlay,
                                                  const PathCatalog& paths,
                                                  const Configuration& config);

struct Pool {
  std::vector<Configuration> configs;
  milp::SolveStatus last_status = milp::SolveStatus::Optimal;
  /// True when the feasible set ran out before `count` configurations.
  bool exhausted = false;
  std::string report;
};

/// Repeated optimal solves, each excluding the previous (placement, routing)
/// incidence vectors with a no-good cut.
Pool generate_pool(const Network& net, const ServiceOverlay& overlay, const PathCatalog& paths,
                   int count, const milp::SolveLimits& limits = {});

/// Fraction of services moved plus demands rerouted, in [0, 1].
double distance(const Configuration& c, const Configuration& e);

/// Number of services moved plus demands rerouted.
int changed_components(const Configuration& c, const Configuration& e);

struct EligibilityMatrix {
  std::vector<std::vector<bool>> alpha;
  double kappa = 0.0;

  int size() const { return static_cast<int>(alpha.size()); }
  bool operator()(int c, int e) const { return alpha[c][e]; }
  int eligible_pairs() const;  // unordered
};

EligibilityMatrix eligibility_matrix(const std::vector<Configuration>& pool, double kappa);

}  // namespace mtd
