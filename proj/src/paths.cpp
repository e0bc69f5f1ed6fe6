#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "mtd/jsar.hpp"

namespace mtd {

const std::vector<int>& PathCatalog::between(int u, int v) const {
  static const std::vector<int> kNone;
  auto it = by_pair.find(std::minmax(u, v));
  return it == by_pair.end() ? kNone : it->second;
}

namespace {

using Cost = std::pair<int, int>;  // (hops, latency)
constexpr Cost kInf{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};

struct Adjacent {
  int node;
  int link;
};

struct PathOrder {
  bool operator()(const Path& a, const Path& b) const {
    return std::make_tuple(a.hops(), a.latency, std::cref(a.nodes)) <
           std::make_tuple(b.hops(), b.latency, std::cref(b.nodes));
  }
};

class Graph {
 public:
  explicit Graph(const Network& net) : net_(net), adj_(net.nodes.size()) {
    for (const auto& l : net.links) {
      adj_[l.u].push_back({l.v, l.id});
      adj_[l.v].push_back({l.u, l.id});
    }
    for (auto& a : adj_)
      std::sort(a.begin(), a.end(), [](auto x, auto y) { return x.node < y.node; });
  }

  // Minimum-cost path from src to dst avoiding banned nodes and links; among
  // equal-cost paths the lexicographically smallest node sequence.
  std::optional<Path> shortest(int src, int dst, const std::vector<bool>& banned_node,
                               const std::vector<bool>& banned_link) const {
    const int n = static_cast<int>(adj_.size());
    std::vector<Cost> dist(n, kInf);
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[dst] = {0, 0};
    pq.push({dist[dst], dst});
    while (!pq.empty()) {
      auto [c, u] = pq.top();
      pq.pop();
      if (c != dist[u]) continue;
      for (auto [w, l] : adj_[u]) {
        if (banned_link[l] || banned_node[w]) continue;
        Cost nc{c.first + 1, c.second + net_.links[l].latency};
        if (nc < dist[w]) {
          dist[w] = nc;
          pq.push({nc, w});
        }
      }
    }
    if (dist[src] == kInf) return std::nullopt;
    Path p;
    p.nodes.push_back(src);
    int cur = src;
    while (cur != dst) {
      for (auto [w, l] : adj_[cur]) {
        if (banned_link[l] || banned_node[w] || dist[w] == kInf) continue;
        Cost via{dist[w].first + 1, dist[w].second + net_.links[l].latency};
        if (via == dist[cur]) {
          p.nodes.push_back(w);
          p.links.push_back(l);
          p.latency += net_.links[l].latency;
          cur = w;
          break;
        }
      }
    }
    return p;
  }

  std::vector<Path> k_shortest(int src, int dst, int k) const {
    const std::size_t n = adj_.size();
    const std::size_t m = net_.links.size();
    std::vector<Path> found;
    std::set<Path, PathOrder> candidates;
    auto first = shortest(src, dst, std::vector<bool>(n, false), std::vector<bool>(m, false));
    if (!first) return found;
    found.push_back(*first);
    while (static_cast<int>(found.size()) < k) {
      const Path& prev = found.back();
      for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
        const int spur = prev.nodes[i];
        std::vector<bool> banned_node(n, false), banned_link(m, false);
        for (const auto& p : found) {
          if (p.nodes.size() > i && std::equal(p.nodes.begin(), p.nodes.begin() + i + 1,
                                               prev.nodes.begin()))
            banned_link[p.links[i]] = true;
        }
        for (std::size_t r = 0; r < i; ++r) banned_node[prev.nodes[r]] = true;
        auto tail = shortest(spur, dst, banned_node, banned_link);
        if (!tail) continue;
        Path total;
        total.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + i);
        total.links.assign(prev.links.begin(), prev.links.begin() + i);
        for (std::size_t r = 0; r < i; ++r) total.latency += net_.links[prev.links[r]].latency;
        total.nodes.insert(total.nodes.end(), tail->nodes.begin(), tail->nodes.end());
        total.links.insert(total.links.end(), tail->links.begin(), tail->links.end());
        total.latency += tail->latency;
        if (std::find(found.begin(), found.end(), total) == found.end())
          candidates.insert(std::move(total));
      }
      if (candidates.empty()) break;
      found.push_back(*candidates.begin());
      candidates.erase(candidates.begin());
    }
    return found;
  }

 private:
  const Network& net_;
  std::vector<std::vector<Adjacent>> adj_;
};

}  // namespace

PathCatalog enumerate_paths(const Network& net, int k) {
  if (k < 1) throw NetworkError("k must be >= 1");
  Graph g(net);
  PathCatalog cat;
  for (int u = 0; u < net.size(); ++u) {
    for (int v = u + 1; v < net.size(); ++v) {
      auto& ids = cat.by_pair[{u, v}];
      for (auto& p : g.k_shortest(u, v, k)) {
        ids.push_back(static_cast<int>(cat.paths.size()));
        cat.paths.push_back(std::move(p));
      }
    }
  }
  return cat;
}

}  // namespace mtd
