#include "mtd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace mtd {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ConfigError(key + ": cannot parse \"" + text + "\"");
  return v;
}

// "1,2,5-8" -> 1 2 5 6 7 8
template <typename T>
std::vector<T> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) {
    auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_number<T>(key, item));
      continue;
    }
    T lo = parse_number<T>(key, trim(item.substr(0, dash)));
    T hi = parse_number<T>(key, trim(item.substr(dash + 1)));
    if (hi < lo) throw ConfigError(key + ": empty range \"" + item + "\"");
    for (T v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

IntRange parse_range(const std::string& key, const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError(key + ": expected lo,hi");
  IntRange r{parse_number<int>(key, parts[0]), parse_number<int>(key, parts[1])};
  if (r.lo > r.hi || r.lo <= 0) throw ConfigError(key + ": expected 0 < lo <= hi");
  return r;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fixed(*v, 6) : "NA"; }

std::string range_str(const IntRange& r) {
  return std::to_string(r.lo) + "," + std::to_string(r.hi);
}

template <typename T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

// Runs f(0..n-1) on up to `workers` threads; rethrows the first failure.
void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (int w = 0; w < std::min(workers, n); ++w) {
    threads.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct SeedData {
  io::InstanceDoc instance;
  PathCatalog catalog;
  Pool pool;
  io::ScenarioDoc scenarios;
  std::string label;
};

SeedData prepare_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedData d;
  d.instance.seed = seed;
  d.instance.network_ranges = cfg.network_ranges;
  d.instance.overlay_ranges = cfg.overlay_ranges;
  Rng topo(derive_seed(seed, stream::kTopology, 0));
  d.instance.network = generate_topology(cfg.n_nodes, cfg.connectivity, topo, cfg.network_ranges);
  if (cfg.capability_density < 1.0) {
    Rng cap(derive_seed(seed, stream::kTopology, 1));
    assign_capabilities(d.instance.network, cfg.n_services, cfg.capability_density, cap);
  }
  Rng ov(derive_seed(seed, stream::kOverlay, 0));
  d.instance.overlay = generate_overlay(cfg.n_services, cfg.n_demands, ov, cfg.overlay_ranges);
  d.catalog = enumerate_paths(d.instance.network, cfg.path_k);

  int largest = 0;
  for (int b : cfg.budgets) largest = std::max(largest, cfg.pool_size_for(b));
  milp::SolveLimits limits;
  limits.time_budget_seconds = cfg.time_budget_seconds;
  if (cfg.max_nodes > 0) limits.max_nodes = cfg.max_nodes;
  d.pool = generate_pool(d.instance.network, d.instance.overlay, d.catalog, largest, limits);

  TimingParams timing{cfg.horizon, cfg.attack_scale, seed};
  std::vector<ScenarioKind> kinds = cfg.kinds;
  int per_kind = cfg.per_kind;
  if (cfg.mixed) {
    Rng pick(derive_seed(seed, stream::kScenarioSet, 0));
    kinds.clear();
    for (int i = 0; i < cfg.per_kind; ++i)
      kinds.push_back(kAllScenarioKinds[pick.uniform_int(0, std::size(kAllScenarioKinds) - 1)]);
    per_kind = 1;
  }
  d.scenarios = {cfg.horizon, cfg.attack_scale, seed, generate_scenario_set(kinds, per_kind, timing)};
  if (cfg.mixed) {
    d.label = "mixed:";
    for (std::size_t i = 0; i < kinds.size(); ++i)
      d.label += (i ? "+" : "") + std::string(to_string(kinds[i]));
  } else {
    d.label = cfg.kinds_label();
  }
  return d;
}

io::PoolDoc pool_doc(const ExperimentConfig& cfg, const SeedData& d,
                     std::vector<Configuration> configs) {
  io::PoolDoc p;
  p.seed = d.instance.seed;
  p.network_ranges = cfg.network_ranges;
  p.overlay_ranges = cfg.overlay_ranges;
  p.path_k = cfg.path_k;
  p.paths = d.catalog;
  p.configurations = std::move(configs);
  p.status = std::string(milp::to_string(d.pool.last_status));
  p.exhausted = d.pool.exhausted;
  p.report = d.pool.report;
  return p;
}

std::string point_dir(int budget, double kappa) {
  return "beta_" + std::to_string(budget) + "_kappa_" + shortest(kappa);
}

RunRow run_point(const ExperimentConfig& cfg, const SeedData& d, int budget, double kappa,
                 const fs::path& dir) {
  RunRow row;
  row.seed = d.instance.seed;
  row.scenario_kinds = d.label;
  row.horizon = cfg.horizon;
  row.attack_scale = cfg.attack_scale;
  row.budget = budget;
  row.kappa = kappa;
  row.components = cfg.n_services + cfg.n_demands;

  const auto take = std::min<std::size_t>(cfg.pool_size_for(budget), d.pool.configs.size());
  std::vector<Configuration> prefix(d.pool.configs.begin(), d.pool.configs.begin() + take);
  row.pool_size = static_cast<int>(prefix.size());
  if (!dir.empty()) io::write_file(dir / "pool.json", io::to_json(pool_doc(cfg, d, prefix)));
  if (prefix.size() >= 2) row.poec = poec(prefix, kappa);
  if (prefix.empty()) {
    row.status = "config_starved";
    return row;
  }

  MtdInstance inst{PlschInstance{d.scenarios.scenarios, cfg.horizon, budget}, prefix,
                   eligibility_matrix(prefix, kappa)};
  const bool starved = static_cast<int>(prefix.size()) < budget ||
                       !has_eligible_path(inst.eligibility, budget - 1);
  MtdModel model = build_composite(inst, PlschOptions{cfg.preprocess});
  milp::SolveLimits limits;
  limits.time_budget_seconds = cfg.time_budget_seconds;
  if (cfg.max_nodes > 0) limits.max_nodes = cfg.max_nodes;
  milp::Solution sol = milp::solve(model.plsch.program, limits);
  row.seconds = sol.seconds;
  if (sol.status == milp::SolveStatus::BudgetExceeded) {
    row.status = "budget_exceeded";
    return row;
  }
  if (sol.status == milp::SolveStatus::Infeasible) {
    row.status = "infeasible";
    return row;
  }
  MtdPlan plan = extract_plan(inst, model, sol);
  plan.config_starved = plan.config_starved || starved;
  row.status = starved ? "config_starved" : "optimal";
  row.objective = plan.schedule.objective;
  row.act = act(plan.schedule, inst.plsch);
  row.por = por(plan, prefix);
  row.retention = retention_terms(plan, prefix);
  row.bound_pairs = bound_pairs(inst, plan);
  for (auto [c, e] : row.bound_pairs)
    row.bound_pair_changes.push_back(changed_components(prefix[c], prefix[e]));

  if (!dir.empty()) {
    io::write_file(dir / "plan.json",
                   io::to_json(io::PlanDoc{cfg.horizon, budget, plan, kappa, "pool.json"}));
    MetricReport report = evaluate(inst, plan);
    report.pool_ref = "pool.json";
    report.plan_ref = "plan.json";
    report.scenarios_ref = "../scenarios.json";
    io::write_file(dir / "metrics.json", io::to_json(report));
  }
  return row;
}

}  // namespace

const char* const kCsvHeader =
    "seed,scenario_kinds,T,lambda,beta,kappa,pool_size,poec,por,act,solve_status,solve_seconds";

void ExperimentConfig::validate() const {
  if (n_nodes < 2) throw ConfigError("n_nodes must be >= 2");
  if (n_services < 2) throw ConfigError("n_services must be >= 2");
  if (n_demands < 1) throw ConfigError("n_demands must be >= 1");
  if (capability_density <= 0.0 || capability_density > 1.0)
    throw ConfigError("capability_density must be in (0, 1]");
  if (horizon < 1 || attack_scale < 1) throw ConfigError("T and lambda must be positive");
  if (budgets.empty() || kappas.empty()) throw ConfigError("beta and kappa lists must be non-empty");
  for (int b : budgets)
    if (b < 0) throw ConfigError("beta must be >= 0");
  for (double k : kappas)
    if (!(k >= 0.0 && k <= 1.0)) throw ConfigError("kappa must be in [0, 1]");
  if (pool_size < 0 || pool_extra < 0) throw ConfigError("pool sizes must be >= 0");
  for (int b : budgets)
    if (pool_size_for(b) < 1) throw ConfigError("pool size must be >= 1");
  if (path_k < 1) throw ConfigError("path_k must be >= 1");
  if (!mixed && kinds.empty()) throw ConfigError("kinds must name at least one scenario kind");
  if (per_kind < 1) throw ConfigError("per_kind must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds must be non-empty");
  if (!(time_budget_seconds > 0.0)) throw ConfigError("time_budget must be positive");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

std::string ExperimentConfig::kinds_label() const {
  if (mixed) return "mixed";
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i)
    out += (i ? "+" : "") + std::string(to_string(kinds[i]));
  return out;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "desk") return cfg;
  if (name == "full") {
    cfg.n_nodes = 20;
    cfg.n_services = 10;
    cfg.n_demands = 15;
    cfg.horizon = 60;
    cfg.attack_scale = 60;
    cfg.budgets = {12};
    cfg.per_kind = 1;
    cfg.mixed = false;
    cfg.kinds.assign(std::begin(kAllScenarioKinds), std::end(kAllScenarioKinds));
    cfg.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
    cfg.time_budget_seconds = 3600.0;
    return cfg;
  }
  throw ConfigError("unknown preset \"" + name + "\" (expected desk or full)");
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "preset") cfg = preset(v);
  else if (key == "n_nodes") cfg.n_nodes = parse_number<int>(key, v);
  else if (key == "connectivity") cfg.connectivity = parse_number<double>(key, v);
  else if (key == "capability_density") cfg.capability_density = parse_number<double>(key, v);
  else if (key == "node_capacity") cfg.network_ranges.node_capacity = parse_range(key, v);
  else if (key == "link_capacity") cfg.network_ranges.link_capacity = parse_range(key, v);
  else if (key == "link_latency") cfg.network_ranges.link_latency = parse_range(key, v);
  else if (key == "n_services") cfg.n_services = parse_number<int>(key, v);
  else if (key == "n_demands") cfg.n_demands = parse_number<int>(key, v);
  else if (key == "service_demand") cfg.overlay_ranges.service_demand = parse_range(key, v);
  else if (key == "demand_rate") cfg.overlay_ranges.demand_rate = parse_range(key, v);
  else if (key == "latency_bound") cfg.overlay_ranges.latency_bound = parse_range(key, v);
  else if (key == "T") cfg.horizon = parse_number<int>(key, v);
  else if (key == "lambda") cfg.attack_scale = parse_number<int>(key, v);
  else if (key == "beta") cfg.budgets = parse_int_list<int>(key, v);
  else if (key == "kappa") {
    cfg.kappas.clear();
    for (const auto& item : split(v, ',')) cfg.kappas.push_back(parse_number<double>(key, item));
  } else if (key == "pool_size") cfg.pool_size = parse_number<int>(key, v);
  else if (key == "pool_extra") cfg.pool_extra = parse_number<int>(key, v);
  else if (key == "path_k") cfg.path_k = parse_number<int>(key, v);
  else if (key == "kinds") {
    cfg.kinds.clear();
    cfg.mixed = v == "mixed";
    if (!cfg.mixed) {
      for (const auto& item : split(v, ',')) {
        try {
          cfg.kinds.push_back(parse_scenario_kind(item));
        } catch (const ScenarioError& e) {
          throw ConfigError(key + ": " + e.what());
        }
      }
    }
  } else if (key == "per_kind") cfg.per_kind = parse_number<int>(key, v);
  else if (key == "seeds") cfg.seeds = parse_int_list<std::uint64_t>(key, v);
  else if (key == "time_budget") cfg.time_budget_seconds = parse_number<double>(key, v);
  else if (key == "max_nodes") cfg.max_nodes = parse_number<std::uint64_t>(key, v);
  else if (key == "preprocess") cfg.preprocess = parse_bool(key, v);
  else if (key == "workers") cfg.workers = parse_number<int>(key, v);
  else throw ConfigError("unknown key \"" + key + "\"");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  std::vector<std::tuple<int, std::string, std::string>> settings;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::optional<std::string> preset_name;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "preset") preset_name = value;
    else settings.emplace_back(lineno, key, value);
  }
  ExperimentConfig cfg;
  try {
    if (preset_name) cfg = preset(*preset_name);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  for (const auto& [ln, key, value] : settings) {
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(ln) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "n_nodes = " << c.n_nodes << "\n"
     << "connectivity = " << shortest(c.connectivity) << "\n"
     << "capability_density = " << shortest(c.capability_density) << "\n"
     << "node_capacity = " << range_str(c.network_ranges.node_capacity) << "\n"
     << "link_capacity = " << range_str(c.network_ranges.link_capacity) << "\n"
     << "link_latency = " << range_str(c.network_ranges.link_latency) << "\n"
     << "n_services = " << c.n_services << "\n"
     << "n_demands = " << c.n_demands << "\n"
     << "service_demand = " << range_str(c.overlay_ranges.service_demand) << "\n"
     << "demand_rate = " << range_str(c.overlay_ranges.demand_rate) << "\n"
     << "latency_bound = " << range_str(c.overlay_ranges.latency_bound) << "\n"
     << "T = " << c.horizon << "\n"
     << "lambda = " << c.attack_scale << "\n"
     << "beta = " << join<int>(c.budgets, [](const int& b) { return std::to_string(b); }) << "\n"
     << "kappa = " << join<double>(c.kappas, [](const double& k) { return shortest(k); }) << "\n"
     << "pool_size = " << c.pool_size << "\n"
     << "pool_extra = " << c.pool_extra << "\n"
     << "path_k = " << c.path_k << "\n"
     << "kinds = " << (c.mixed ? std::string("mixed")
                                : join<ScenarioKind>(c.kinds, [](const ScenarioKind& k) {
                                    return std::string(to_string(k));
                                  }))
     << "\n"
     << "per_kind = " << c.per_kind << "\n"
     << "seeds = "
     << join<std::uint64_t>(c.seeds, [](const std::uint64_t& s) { return std::to_string(s); })
     << "\n"
     << "time_budget = " << shortest(c.time_budget_seconds) << "\n"
     << "max_nodes = " << c.max_nodes << "\n"
     << "preprocess = " << (c.preprocess ? "true" : "false") << "\n"
     << "workers = " << c.workers << "\n";
  return os.str();
}

RunResult run(const ExperimentConfig& cfg, const fs::path& run_dir) {
  cfg.validate();
  const int n_seeds = static_cast<int>(cfg.seeds.size());
  std::vector<SeedData> seeds(n_seeds);
  parallel_for(n_seeds, cfg.workers, [&](int i) {
    seeds[i] = prepare_seed(cfg, cfg.seeds[i]);
    if (run_dir.empty()) return;
    fs::path dir = run_dir / ("seed_" + std::to_string(cfg.seeds[i]));
    io::write_file(dir / "instance.json", io::to_json(seeds[i].instance));
    auto pool = pool_doc(cfg, seeds[i], seeds[i].pool.configs);
    pool.instance_ref = "instance.json";
    io::write_file(dir / "pool.json", io::to_json(pool));
    io::write_file(dir / "scenarios.json", io::to_json(seeds[i].scenarios));
  });

  struct Point {
    int seed_index;
    int budget;
    double kappa;
  };
  std::vector<Point> points;
  for (int s = 0; s < n_seeds; ++s)
    for (int b : cfg.budgets)
      for (double k : cfg.kappas) points.push_back({s, b, k});

  RunResult result;
  result.rows.resize(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.workers, [&](int i) {
    const auto& p = points[i];
    fs::path dir;
    if (!run_dir.empty())
      dir = run_dir / ("seed_" + std::to_string(cfg.seeds[p.seed_index])) /
            point_dir(p.budget, p.kappa);
    result.rows[i] = run_point(cfg, seeds[p.seed_index], p.budget, p.kappa, dir);
  });

  if (!run_dir.empty()) {
    fs::create_directories(run_dir);
    std::ofstream(run_dir / "config.txt") << dump_config(cfg);
    std::ofstream csv(run_dir / "results.csv");
    write_csv(csv, result);
    std::ofstream tsv(run_dir / "summary.tsv");
    write_summary_tsv(tsv, result);
  }
  return result;
}

void write_csv(std::ostream& os, const RunResult& result) {
  os << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    os << r.seed << ',' << r.scenario_kinds << ',' << r.horizon << ',' << r.attack_scale << ','
       << r.budget << ',' << shortest(r.kappa) << ',' << r.pool_size << ',' << opt(r.poec) << ','
       << opt(r.por) << ',' << opt(r.act) << ',' << r.status << ',' << fixed(r.seconds, 3)
       << '\n';
  }
}

std::pair<double, double> mean_ci95(const std::vector<double>& values) {
  if (values.empty()) return {std::nan(""), 0.0};
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  boost::math::students_t dist(n - 1);
  return {mean, boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n)};
}

void write_summary_tsv(std::ostream& os, const RunResult& result) {
  // Mixed rows carry their drawn kinds after a colon; group them together.
  auto group_of = [](const std::string& kinds) { return kinds.substr(0, kinds.find(':')); };
  std::map<std::tuple<std::string, int, double>, std::vector<const RunRow*>> groups;
  for (const auto& r : result.rows) groups[{group_of(r.scenario_kinds), r.budget, r.kappa}].push_back(&r);

  os << "# scenario_kinds\tbeta\tkappa\tn\tpoec_mean\tpoec_ci95\tpor_mean\tpor_ci95\tact_mean\tact_ci95\n";
  for (const auto& [key, rows] : groups) {
    const auto& [kinds, beta, kappa] = key;
    os << kinds << '\t' << beta << '\t' << shortest(kappa) << '\t' << rows.size();
    for (auto field : {&RunRow::poec, &RunRow::por, &RunRow::act}) {
      std::vector<double> v;
      for (const auto* r : rows)
        if ((r->*field).has_value()) v.push_back(*(r->*field));
      if (v.empty()) {
        os << "\tNA\tNA";
      } else {
        auto [m, h] = mean_ci95(v);
        os << '\t' << fixed(m, 6) << '\t' << fixed(h, 6);
      }
    }
    os << '\n';
  }
}

}  // namespace mtd
