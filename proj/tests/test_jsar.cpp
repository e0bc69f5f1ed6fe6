#include <algorithm>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "mtd/jsar.hpp"
#include "oracles.hpp"

using namespace mtd;

namespace {

// a=0, b=1, c=2; s0 only on a, s1 on b or c; one demand s0-s1 with bound 4.
struct Triangle {
  Network net;
  ServiceOverlay overlay;
  PathCatalog paths;
  Triangle() {
    net.nodes = {{0, 5, {true, false}}, {1, 5, {false, true}}, {2, 5, {false, true}}};
    net.links = {{0, 0, 1, 10, 1}, {1, 0, 2, 10, 2}, {2, 1, 2, 10, 3}};
    overlay.services = {{0, 1}, {1, 1}};
    overlay.demands = {{0, 0, 1, 1, 4}};
    paths = enumerate_paths(net, 3);
  }
};

// All valid configurations by direct enumeration of placements and routings.
std::vector<Configuration> brute_force(const Network& net, const ServiceOverlay& o,
                                       const PathCatalog& paths) {
  const int S = static_cast<int>(o.services.size());
  const int D = static_cast<int>(o.demands.size());
  const int P = static_cast<int>(paths.paths.size());
  std::vector<Configuration> out;
  Configuration c;
  c.placement.assign(S, 0);
  c.routing.assign(D, 0);
  while (true) {
    std::fill(c.routing.begin(), c.routing.end(), 0);
    while (true) {
      c.objective = 0;
      for (int p : c.routing) c.objective += paths.paths[p].hops();
      if (!validate_configuration(net, o, paths, c)) out.push_back(c);
      int d = 0;
      while (d < D && ++c.routing[d] == P) c.routing[d++] = 0;
      if (d == D) break;
    }
    int s = 0;
    while (s < S && ++c.placement[s] == net.size()) c.placement[s++] = 0;
    if (s == S) break;
  }
  return out;
}

}  // namespace

TEST_CASE("triangle has exactly three configurations") {
  Triangle t;
  auto pool = generate_pool(t.net, t.overlay, t.paths, 10);
  CHECK(pool.exhausted);
  CHECK(pool.last_status == milp::SolveStatus::Infeasible);
  REQUIRE(pool.configs.size() == 3);
  CHECK(pool.configs[0].objective == 1);
  CHECK(pool.configs[1].objective == 1);
  CHECK(pool.configs[2].objective == 2);
  std::set<std::vector<int>> hosts_and_paths;
  for (const auto& c : pool.configs) {
    CHECK_FALSE(validate_configuration(t.net, t.overlay, t.paths, c).has_value());
    auto key = c.placement;
    key.insert(key.end(), c.routing.begin(), c.routing.end());
    hosts_and_paths.insert(key);
  }
  CHECK(hosts_and_paths.size() == 3);
  CHECK(brute_force(t.net, t.overlay, t.paths).size() == 3);
}

TEST_CASE("two nodes, two services, one demand") {
  Network net;
  net.nodes = {{0, 1, {}}, {1, 1, {}}};
  net.links = {{0, 0, 1, 5, 1}};
  ServiceOverlay o;
  o.services = {{0, 1}, {1, 1}};
  o.demands = {{0, 0, 1, 1, 3}};
  auto paths = enumerate_paths(net, 2);
  auto pool = generate_pool(net, o, paths, 5);
  REQUIRE(pool.configs.size() == 2);  // capacity 1 forces the services apart
  CHECK(pool.configs[0].objective == 1);
  CHECK(pool.exhausted);

  SUBCASE("capacity pins the placement") {
    net.nodes[1].capacity = 0;
    CHECK_THROWS_AS(generate_pool(net, o, paths, 1), NetworkError);
  }
  SUBCASE("tight latency bound is infeasible") {
    o.demands[0].latency_bound = 0;
    CHECK_THROWS_AS(generate_pool(net, o, paths, 1), NetworkError);
    o.demands[0].latency_bound = 1;
    net.links[0].latency = 2;
    auto none = generate_pool(net, o, enumerate_paths(net, 2), 3);
    CHECK(none.configs.empty());
    CHECK(none.exhausted);
    CHECK(none.report == "placement and routing model is infeasible");
  }
  SUBCASE("link capacity") {
    net.links[0].capacity = 1;
    o.demands[0].rate = 2;
    CHECK(generate_pool(net, o, paths, 3).configs.empty());
  }
}

TEST_CASE("pool matches brute force on tiny random instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const int n = static_cast<int>(rng.uniform_int(2, 3));
    auto net = generate_topology(n, n == 2 ? 0.5 : 1.0, rng, {{2, 4}, {2, 6}, {1, 3}});
    assign_capabilities(net, 3, 0.7, rng);
    auto o = generate_overlay(3, 2, rng, {{1, 2}, {1, 3}, {2, 6}});
    auto paths = enumerate_paths(net, 2);
    auto ref = brute_force(net, o, paths);
    const int count = static_cast<int>(rng.uniform_int(1, 8));
    auto pool = generate_pool(net, o, paths, count);
    CAPTURE(seed);
    REQUIRE(pool.configs.size() == std::min<std::size_t>(count, ref.size()));
    CHECK(pool.exhausted == (static_cast<int>(ref.size()) < count));

    std::vector<long long> want;
    for (const auto& c : ref) want.push_back(c.objective);
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < pool.configs.size(); ++i) {
      const auto& c = pool.configs[i];
      CHECK(c.objective == want[i]);
      CHECK(std::find(ref.begin(), ref.end(), c) != ref.end());
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(pool.configs[j] == c);
    }
  }
}

TEST_CASE("pool members are valid, distinct and non-decreasing in cost") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    auto net = generate_topology(6, 1.5, rng);
    auto o = generate_overlay(4, 4, rng);
    auto paths = enumerate_paths(net, 3);
    auto pool = generate_pool(net, o, paths, 6);
    for (std::size_t i = 0; i < pool.configs.size(); ++i) {
      CHECK_FALSE(validate_configuration(net, o, paths, pool.configs[i]).has_value());
      if (i > 0) CHECK(pool.configs[i - 1].objective <= pool.configs[i].objective);
      for (std::size_t j = 0; j < i; ++j) CHECK(distance(pool.configs[i], pool.configs[j]) > 0.0);
    }
  }
}

TEST_CASE("validator catches each violation") {
  Triangle t;
  Configuration ok{{0, 1}, {t.paths.between(0, 1)[0]}, 1};
  REQUIRE_FALSE(validate_configuration(t.net, t.overlay, t.paths, ok).has_value());
  auto bad = ok;
  bad.placement[0] = 1;
  CHECK(validate_configuration(t.net, t.overlay, t.paths, bad).has_value());
  bad = ok;
  bad.routing[0] = t.paths.between(0, 2)[0];
  CHECK(validate_configuration(t.net, t.overlay, t.paths, bad).has_value());
  bad = ok;
  bad.routing[0] = t.paths.between(0, 1)[1];  // latency 5 > 4
  bad.objective = 2;
  CHECK(*validate_configuration(t.net, t.overlay, t.paths, bad) ==
        "demand 0 exceeds its latency bound");
  bad = ok;
  bad.objective = 3;
  CHECK(*validate_configuration(t.net, t.overlay, t.paths, bad) == "objective mismatch");
  auto net = t.net;
  net.nodes[1].capacity = 0;
  CHECK(validate_configuration(net, t.overlay, t.paths, ok).has_value());
}

TEST_CASE("distance and eligibility") {
  // three services, two demands, one service moved
  Configuration a{{0, 1, 2}, {0, 1}, 0};
  Configuration b{{0, 1, 3}, {0, 1}, 0};
  CHECK(distance(a, b) == doctest::Approx(0.2));
  CHECK(distance(a, a) == 0.0);
  CHECK(distance(a, b) == oracle::distance(a, b));
  Configuration c{{5, 5, 5}, {4, 4}, 0};
  CHECK(distance(a, c) == 1.0);
  CHECK(changed_components(a, c) == 5);
  Configuration other{{0}, {0}, 0};
  CHECK_THROWS_AS(distance(a, other), NetworkError);

  // pairwise distances 0.2, 0.6, 0.6 over a pool of three
  std::vector<Configuration> pool{a, b, {{0, 4, 4}, {0, 2}, 0}};
  CHECK(distance(pool[0], pool[2]) == doctest::Approx(0.6));
  CHECK(distance(pool[1], pool[2]) == doctest::Approx(0.6));
  auto m = eligibility_matrix(pool, 0.4);
  CHECK(m.eligible_pairs() == 2);
  CHECK_FALSE(m(0, 1));
  CHECK(m(0, 2));
  CHECK(m(2, 0));
  CHECK_FALSE(m(1, 1));
  CHECK(eligibility_matrix(pool, 0.0).eligible_pairs() == 3);
  CHECK(eligibility_matrix(pool, 1.0).eligible_pairs() == 0);
}

TEST_CASE("oracle distance agrees on random pairs") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    Configuration x, y;
    for (int s = 0; s < 4; ++s) {
      x.placement.push_back(int(rng.uniform_int(0, 2)));
      y.placement.push_back(int(rng.uniform_int(0, 2)));
    }
    for (int d = 0; d < 3; ++d) {
      x.routing.push_back(int(rng.uniform_int(0, 2)));
      y.routing.push_back(int(rng.uniform_int(0, 2)));
    }
    CHECK(distance(x, y) == oracle::distance(x, y));
    CHECK(distance(x, y) == distance(y, x));
  }
}
