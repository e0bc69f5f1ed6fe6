#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "mtd/jsar.hpp"

namespace mtd {

bool Network::capable(int node, int service) const {
  const auto& c = nodes.at(node).capable;
  return c.empty() || (service < static_cast<int>(c.size()) && c[service]);
}

bool Network::connected() const {
  if (nodes.empty()) return true;
  std::vector<std::vector<int>> adj(nodes.size());
  for (const auto& l : links) {
    adj[l.u].push_back(l.v);
    adj[l.v].push_back(l.u);
  }
  std::vector<bool> seen(nodes.size(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : adj[u]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == nodes.size();
}

void Network::validate() const {
  if (nodes.size() < 2) throw NetworkError("network needs at least two nodes");
  for (int i = 0; i < size(); ++i) {
    if (nodes[i].id != i) throw NetworkError("node ids must be 0..n-1 in order");
    if (nodes[i].capacity <= 0) throw NetworkError("node capacities must be positive");
  }
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < static_cast<int>(links.size()); ++i) {
    const auto& l = links[i];
    if (l.id != i) throw NetworkError("link ids must be 0..m-1 in order");
    if (l.u < 0 || l.v < 0 || l.u >= size() || l.v >= size() || l.u == l.v)
      throw NetworkError("link " + std::to_string(i) + " has invalid endpoints");
    if (l.capacity <= 0 || l.latency <= 0)
      throw NetworkError("link capacities and latencies must be positive");
    if (!seen.insert(std::minmax(l.u, l.v)).second)
      throw NetworkError("parallel links between " + std::to_string(l.u) + " and " +
                         std::to_string(l.v));
  }
  if (!connected()) throw NetworkError("network is not connected");
}

void ServiceOverlay::validate() const {
  for (int i = 0; i < static_cast<int>(services.size()); ++i) {
    if (services[i].id != i) throw NetworkError("service ids must be 0..n-1 in order");
    if (services[i].demand <= 0) throw NetworkError("service demands must be positive");
  }
  const int n = static_cast<int>(services.size());
  for (int i = 0; i < static_cast<int>(demands.size()); ++i) {
    const auto& d = demands[i];
    if (d.id != i) throw NetworkError("demand ids must be 0..n-1 in order");
    if (d.s < 0 || d.t < 0 || d.s >= n || d.t >= n || d.s == d.t)
      throw NetworkError("demand " + std::to_string(i) + " has invalid endpoints");
    if (d.rate <= 0 || d.latency_bound <= 0)
      throw NetworkError("demand rates and latency bounds must be positive");
  }
}

namespace {

// Decodes a Pruefer sequence into the edges of a labelled tree.
std::vector<std::pair<int, int>> pruefer_tree(int n, Rng& rng) {
  if (n == 2) return {{0, 1}};
  std::vector<int> seq(n - 2);
  for (auto& s : seq) s = static_cast<int>(rng.uniform_int(0, n - 1));
  std::vector<int> degree(n, 1);
  for (int s : seq) ++degree[s];
  std::set<int> leaves;
  for (int i = 0; i < n; ++i)
    if (degree[i] == 1) leaves.insert(i);
  std::vector<std::pair<int, int>> edges;
  for (int s : seq) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
    if (--degree[s] == 1) leaves.insert(s);
  }
  int a = *leaves.begin();
  int b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return edges;
}

}  // namespace

Network generate_topology(int n_nodes, double connectivity, Rng& rng, const NetworkRanges& ranges) {
  if (n_nodes < 2) throw NetworkError("n_nodes must be >= 2");
  if (connectivity * n_nodes < n_nodes - 1 - 1e-9)
    throw NetworkError("connectivity too low for a connected graph");
  const long long edges = std::lround(connectivity * n_nodes);
  const long long max_edges = static_cast<long long>(n_nodes) * (n_nodes - 1) / 2;
  if (edges > max_edges)
    throw NetworkError(std::to_string(edges) + " links exceed the simple-graph maximum " +
                       std::to_string(max_edges));

  auto tree = pruefer_tree(n_nodes, rng);
  std::set<std::pair<int, int>> present(tree.begin(), tree.end());
  std::vector<std::pair<int, int>> candidates;
  for (int u = 0; u < n_nodes; ++u)
    for (int v = u + 1; v < n_nodes; ++v)
      if (!present.contains({u, v})) candidates.emplace_back(u, v);
  rng.shuffle(candidates);
  std::vector<std::pair<int, int>> all = tree;
  for (long long i = 0; i < edges - static_cast<long long>(tree.size()); ++i)
    all.push_back(candidates[i]);
  std::sort(all.begin(), all.end());

  Network net;
  for (int i = 0; i < n_nodes; ++i) net.nodes.push_back({i, ranges.node_capacity.sample(rng), {}});
  for (const auto& [u, v] : all) {
    int id = static_cast<int>(net.links.size());
    int cap = ranges.link_capacity.sample(rng);
    int lat = ranges.link_latency.sample(rng);
    net.links.push_back({id, u, v, cap, lat});
  }
  return net;
}

void assign_capabilities(Network& net, int n_services, double density, Rng& rng) {
  for (auto& node : net.nodes) {
    node.capable.assign(n_services, false);
    for (int s = 0; s < n_services; ++s) node.capable[s] = rng.unit() < density;
  }
  for (int s = 0; s < n_services; ++s) {
    bool any = std::any_of(net.nodes.begin(), net.nodes.end(),
                           [&](const Node& n) { return n.capable[s]; });
    if (!any) net.nodes[rng.uniform_int(0, net.size() - 1)].capable[s] = true;
  }
}

ServiceOverlay generate_overlay(int n_services, int n_demands, Rng& rng,
                                const OverlayRanges& ranges) {
  if (n_services < 2) throw NetworkError("n_services must be >= 2");
  if (n_demands < 1) throw NetworkError("n_demands must be >= 1");
  std::vector<std::pair<int, int>> pairs;
  for (int s = 0; s < n_services; ++s)
    for (int t = s + 1; t < n_services; ++t) pairs.emplace_back(s, t);
  if (n_demands > static_cast<int>(pairs.size()))
    throw NetworkError(std::to_string(n_demands) + " demands exceed the " +
                       std::to_string(pairs.size()) + " distinct service pairs");
  ServiceOverlay o;
  for (int s = 0; s < n_services; ++s) o.services.push_back({s, ranges.service_demand.sample(rng)});
  rng.shuffle(pairs);
  pairs.resize(n_demands);
  std::sort(pairs.begin(), pairs.end());
  for (int d = 0; d < n_demands; ++d) {
    int rate = ranges.demand_rate.sample(rng);
    int bound = ranges.latency_bound.sample(rng);
    o.demands.push_back({d, pairs[d].first, pairs[d].second, rate, bound});
  }
  return o;
}

}  // namespace mtd
