#include "mtd/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace mtd::io {

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(source + ": syntax error at byte " + std::to_string(e.byte) + ": " +
                      e.what());
  }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void write_file(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  out << doc.dump(2) << '\n';
}

namespace {

// A value inside a document together with its location, for error messages.
class At {
 public:
  At(const json& j, std::string source, std::string ptr = "")
      : j_(j), source_(std::move(source)), ptr_(std::move(ptr)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(source_ + ": " + (ptr_.empty() ? "/" : ptr_) + ": " + msg);
  }

  At operator[](const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) fail(std::string("missing key \"") + key + "\"");
    return At(*it, source_, ptr_ + "/" + key);
  }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  std::vector<At> items() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<At> out;
    for (std::size_t i = 0; i < j_.size(); ++i)
      out.emplace_back(j_[i], source_, ptr_ + "/" + std::to_string(i));
    return out;
  }

  long long integer(long long lo = std::numeric_limits<int>::min(),
                    long long hi = std::numeric_limits<int>::max()) const {
    if (!j_.is_number_integer()) fail("expected an integer");
    if (j_.is_number_unsigned() && j_.get<std::uint64_t>() > static_cast<std::uint64_t>(hi))
      fail("integer out of range");
    long long v = j_.get<long long>();
    if (v < lo || v > hi) fail("integer out of range");
    return v;
  }
  int int32(int lo = std::numeric_limits<int>::min()) const {
    return static_cast<int>(integer(lo));
  }
  std::uint64_t u64() const {
    if (!j_.is_number_integer() || (j_.is_number_integer() && !j_.is_number_unsigned() &&
                                    j_.get<long long>() < 0))
      fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected a boolean");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<int> ints() const {
    std::vector<int> out;
    for (const auto& a : items()) out.push_back(a.int32());
    return out;
  }
  IntRange range() const {
    auto v = ints();
    if (v.size() != 2 || v[0] > v[1]) fail("expected [lo, hi] with lo <= hi");
    return {v[0], v[1]};
  }

  // Runs f and rethrows domain errors with this location attached.
  template <typename F>
  auto checked(F&& f) const {
    try {
      return f();
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

 private:
  const json& j_;
  std::string source_;
  std::string ptr_;
};

json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

json ranges_json(const NetworkRanges& n, const OverlayRanges& o) {
  return {{"node_capacity", range_json(n.node_capacity)},
          {"link_capacity", range_json(n.link_capacity)},
          {"link_latency", range_json(n.link_latency)},
          {"service_demand", range_json(o.service_demand)},
          {"demand_rate", range_json(o.demand_rate)},
          {"latency_bound", range_json(o.latency_bound)}};
}

void read_ranges(const At& a, NetworkRanges& n, OverlayRanges& o) {
  n.node_capacity = a["node_capacity"].range();
  n.link_capacity = a["link_capacity"].range();
  n.link_latency = a["link_latency"].range();
  o.service_demand = a["service_demand"].range();
  o.demand_rate = a["demand_rate"].range();
  o.latency_bound = a["latency_bound"].range();
}

json network_json(const Network& net) {
  json nodes = json::array(), links = json::array();
  for (const auto& n : net.nodes) {
    json node = {{"id", n.id}, {"capacity", n.capacity}};
    if (!n.capable.empty()) {
      json cap = json::array();
      for (std::size_t s = 0; s < n.capable.size(); ++s)
        if (n.capable[s]) cap.push_back(s);
      node["capable"] = cap;
    }
    nodes.push_back(node);
  }
  for (const auto& l : net.links)
    links.push_back({{"id", l.id}, {"u", l.u}, {"v", l.v}, {"capacity", l.capacity},
                     {"latency", l.latency}});
  return {{"nodes", nodes}, {"links", links}};
}

json overlay_json(const ServiceOverlay& o) {
  json services = json::array(), demands = json::array();
  for (const auto& s : o.services) services.push_back({{"id", s.id}, {"demand", s.demand}});
  for (const auto& d : o.demands)
    demands.push_back({{"id", d.id}, {"s", d.s}, {"t", d.t}, {"rate", d.rate},
                       {"latency_bound", d.latency_bound}});
  return {{"services", services}, {"demands", demands}};
}

ServiceOverlay read_overlay(const At& a) {
  ServiceOverlay o;
  for (const auto& s : a["services"].items()) o.services.push_back({s["id"].int32(), s["demand"].int32()});
  for (const auto& d : a["demands"].items())
    o.demands.push_back({d["id"].int32(), d["s"].int32(), d["t"].int32(), d["rate"].int32(),
                         d["latency_bound"].int32()});
  a.checked([&] {
    o.validate();
    return 0;
  });
  return o;
}

Network read_network(const At& a, int n_services) {
  Network net;
  for (const auto& n : a["nodes"].items()) {
    Node node{n["id"].int32(), n["capacity"].int32(), {}};
    if (n.has("capable")) {
      node.capable.assign(n_services, false);
      for (const auto& s : n["capable"].items()) {
        int sv = s.int32(0);
        if (sv >= n_services) s.fail("service id out of range");
        node.capable[sv] = true;
      }
    }
    net.nodes.push_back(std::move(node));
  }
  for (const auto& l : a["links"].items())
    net.links.push_back({l["id"].int32(), l["u"].int32(), l["v"].int32(), l["capacity"].int32(),
                         l["latency"].int32()});
  a.checked([&] {
    net.validate();
    return 0;
  });
  return net;
}

json schedule_fields(const DefenseSchedule& s, int horizon, int budget) {
  json starts = json::array();
  for (const auto& [ref, t] : s.job_starts)
    starts.push_back({{"machine", ref.machine}, {"job", ref.job + 1}, {"t", t}});
  return {{"T", horizon}, {"beta", budget}, {"actions", s.action_times}, {"starts", starts},
          {"objective", s.objective}};
}

DefenseSchedule read_schedule(const At& a) {
  DefenseSchedule s;
  s.action_times = a["actions"].ints();
  for (const auto& st : a["starts"].items()) {
    JobRef ref{st["machine"].int32(0), st["job"].int32(1) - 1};
    if (!s.job_starts.emplace(ref, st["t"].int32(0)).second) st.fail("job listed twice");
  }
  s.objective = a["objective"].integer(0, std::numeric_limits<long long>::max());
  return s;
}

}  // namespace

json to_json(const ScenarioDoc& doc) {
  json scenarios = json::array();
  for (const auto& sc : doc.scenarios) {
    json jobs = json::array();
    for (const auto& j : sc.jobs)
      jobs.push_back({{"kind", std::string(to_string(j.kind))}, {"duration", j.duration}});
    scenarios.push_back({{"kind", std::string(to_string(sc.kind))}, {"jobs", jobs}});
  }
  return {{"T", doc.horizon}, {"lambda", doc.attack_scale}, {"seed", doc.seed},
          {"scenarios", scenarios}};
}

ScenarioDoc scenarios_from_json(const json& j, const std::string& source) {
  At a(j, source);
  ScenarioDoc doc;
  doc.horizon = a["T"].int32(1);
  doc.attack_scale = a["lambda"].int32(1);
  doc.seed = a["seed"].u64();
  int m = 0;
  for (const auto& s : a["scenarios"].items()) {
    AttackScenario sc;
    sc.machine_id = m++;
    sc.kind = s["kind"].checked([&] { return parse_scenario_kind(s["kind"].string()); });
    int idx = 1;
    for (const auto& job : s["jobs"].items()) {
      AttackJob aj;
      aj.kind = job["kind"].checked([&] { return parse_attack_kind(job["kind"].string()); });
      aj.duration = job["duration"].int32(1);
      aj.index = idx++;
      sc.jobs.push_back(aj);
    }
    doc.scenarios.push_back(std::move(sc));
  }
  return doc;
}

json to_json(const InstanceDoc& doc) {
  return {{"seed", doc.seed},
          {"ranges", ranges_json(doc.network_ranges, doc.overlay_ranges)},
          {"network", network_json(doc.network)},
          {"overlay", overlay_json(doc.overlay)}};
}

InstanceDoc instance_from_json(const json& j, const std::string& source) {
  At a(j, source);
  InstanceDoc doc;
  doc.seed = a["seed"].u64();
  read_ranges(a["ranges"], doc.network_ranges, doc.overlay_ranges);
  doc.overlay = read_overlay(a["overlay"]);
  doc.network = read_network(a["network"], static_cast<int>(doc.overlay.services.size()));
  return doc;
}

json to_json(const PoolDoc& doc) {
  json paths = json::array(), configs = json::array();
  for (const auto& p : doc.paths.paths)
    paths.push_back({{"nodes", p.nodes}, {"links", p.links}, {"latency", p.latency}});
  for (const auto& c : doc.configurations)
    configs.push_back(
        {{"placement", c.placement}, {"routing", c.routing}, {"objective", c.objective}});
  json out = {{"seed", doc.seed},
              {"ranges", ranges_json(doc.network_ranges, doc.overlay_ranges)},
              {"path_k", doc.path_k},
              {"paths", paths},
              {"configurations", configs},
              {"status", doc.status},
              {"exhausted", doc.exhausted},
              {"report", doc.report}};
  if (!doc.instance_ref.empty()) out["instance_ref"] = doc.instance_ref;
  return out;
}

PoolDoc pool_from_json(const json& j, const std::string& source) {
  At a(j, source);
  PoolDoc doc;
  doc.seed = a["seed"].u64();
  read_ranges(a["ranges"], doc.network_ranges, doc.overlay_ranges);
  doc.path_k = a["path_k"].int32(1);
  for (const auto& p : a["paths"].items()) {
    Path path{p["nodes"].ints(), p["links"].ints(), p["latency"].int32(0)};
    if (path.nodes.size() != path.links.size() + 1) p.fail("node and link counts disagree");
    int id = static_cast<int>(doc.paths.paths.size());
    doc.paths.by_pair[std::minmax(path.nodes.front(), path.nodes.back())].push_back(id);
    doc.paths.paths.push_back(std::move(path));
  }
  for (const auto& c : a["configurations"].items()) {
    Configuration cfg{c["placement"].ints(), c["routing"].ints(),
                      c["objective"].integer(0, std::numeric_limits<long long>::max())};
    for (int p : cfg.routing)
      if (p < 0 || p >= static_cast<int>(doc.paths.paths.size()))
        c["routing"].fail("path id out of range");
    if (!doc.configurations.empty() &&
        (cfg.placement.size() != doc.configurations.front().placement.size() ||
         cfg.routing.size() != doc.configurations.front().routing.size()))
      c.fail("configuration shape differs from the first configuration");
    doc.configurations.push_back(std::move(cfg));
  }
  doc.status = a["status"].string();
  doc.exhausted = a["exhausted"].boolean();
  doc.report = a["report"].string();
  if (a.has("instance_ref")) doc.instance_ref = a["instance_ref"].string();
  return doc;
}

json schedule_to_json(const DefenseSchedule& s, int horizon, int budget) {
  return schedule_fields(s, horizon, budget);
}

DefenseSchedule schedule_from_json(const json& j, const std::string& source, int* horizon,
                                   int* budget) {
  At a(j, source);
  if (horizon) *horizon = a["T"].int32(1);
  if (budget) *budget = a["beta"].int32(0);
  return read_schedule(a);
}

json to_json(const PlanDoc& doc) {
  json out = schedule_fields(doc.plan.schedule, doc.horizon, doc.budget);
  json cfg = json::array();
  for (const auto& [t, c] : doc.plan.config_at) cfg.push_back({{"t", t}, {"config_index", c}});
  out["config_at"] = cfg;
  out["kappa"] = doc.kappa;
  out["pool_ref"] = doc.pool_ref;
  out["config_starved"] = doc.plan.config_starved;
  return out;
}

PlanDoc plan_from_json(const json& j, const std::string& source) {
  At a(j, source);
  PlanDoc doc;
  doc.horizon = a["T"].int32(1);
  doc.budget = a["beta"].int32(0);
  doc.plan.schedule = read_schedule(a);
  for (const auto& e : a["config_at"].items()) {
    int t = e["t"].int32(0);
    if (!doc.plan.config_at.emplace(t, e["config_index"].int32(0)).second)
      e.fail("two configurations at one time");
  }
  doc.kappa = a["kappa"].number();
  doc.pool_ref = a["pool_ref"].string();
  doc.plan.config_starved = a["config_starved"].boolean();
  return doc;
}

json to_json(const MetricReport& r) {
  json out;
  out["poec"] = r.poec ? json(*r.poec) : json(nullptr);
  out["por"] = r.por ? json(*r.por) : json(nullptr);
  out["act"] = r.act;
  out["inputs"] = {{"pool", r.pool_ref}, {"plan", r.plan_ref}, {"scenarios", r.scenarios_ref}};
  return out;
}

}  // namespace mtd::io
