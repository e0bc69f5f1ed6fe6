// mtdctl: command-line front end for the MTD scheduling pipeline.
//
//   gen-topology -> instance.json -> pool -> pool.json --+
//                                                          +-> plan -> plan.json -> metrics
//   gen-scenarios -> scenarios.json -------------------------+
//                                  `-> schedule (no configurations)
//   sweep runs the whole chain for a config file and writes a CSV.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mtd/harness.hpp"

using namespace mtd;
namespace fs = std::filesystem;

namespace {

constexpr int kExitError = 1;
constexpr int kExitBudget = 3;

class CommandError : public std::runtime_error {
 public:
  CommandError(const std::string& msg, int code = kExitError)
      : std::runtime_error(msg), code(code) {}
  int code;
};

io::json read_doc(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return io::parse(ss.str(), "<stdin>");
  }
  return io::read_file(path);
}

std::string source_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

void emit(const std::string& path, const io::json& doc) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    io::write_file(path, doc);
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CommandError(path + ": cannot write");
  out << text;
}

milp::SolveLimits limits_from(double seconds, std::uint64_t nodes) {
  milp::SolveLimits l;
  l.time_budget_seconds = seconds;
  if (nodes > 0) l.max_nodes = nodes;
  return l;
}

milp::Solution solve_or_fail(const milp::BinaryProgram& program, const milp::SolveLimits& limits) {
  milp::Solution sol = milp::solve(program, limits);
  if (sol.status == milp::SolveStatus::BudgetExceeded)
    throw CommandError("solver budget exceeded after " + std::to_string(sol.nodes) + " nodes",
                       kExitBudget);
  if (sol.status == milp::SolveStatus::Infeasible) throw CommandError("model is infeasible");
  return sol;
}

PlschInstance instance_from(const io::ScenarioDoc& sc, int horizon, int budget) {
  PlschInstance inst{sc.scenarios, horizon > 0 ? horizon : sc.horizon, budget};
  inst.validate();
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-target-defense scheduling pipeline"};
  app.require_subcommand(1);
  std::string out = "-";

  // gen-topology
  auto* topo = app.add_subcommand("gen-topology", "Random network and service overlay");
  int nodes = 8, services = 5, demands = 6;
  double connectivity = 1.7, density = 1.0;
  std::uint64_t topo_seed = 1;
  topo->add_option("--nodes", nodes, "Number of nodes")->capture_default_str();
  topo->add_option("--connectivity", connectivity, "Links per node")->capture_default_str();
  topo->add_option("--services", services, "Number of services")->capture_default_str();
  topo->add_option("--demands", demands, "Number of demands")->capture_default_str();
  topo->add_option("--density", density, "Capability density (1 = all capable)")
      ->capture_default_str();
  topo->add_option("--seed", topo_seed, "Seed")->capture_default_str();
  topo->add_option("-o,--out", out, "Output file (- for stdout)");

  // gen-scenarios
  auto* gen = app.add_subcommand("gen-scenarios", "Attack scenario set");
  std::vector<std::string> kind_names{"mixed"};
  int per_kind = 1, horizon = 20, scale = 20;
  std::uint64_t scen_seed = 1;
  gen->add_option("--kind", kind_names, "Scenario kinds, or mixed")->delimiter(',')->capture_default_str();
  gen->add_option("--per-kind", per_kind, "Scenarios per kind (machines when mixed)")
      ->capture_default_str();
  gen->add_option("--T", horizon, "Time horizon")->capture_default_str();
  gen->add_option("--lambda", scale, "Attack scale")->capture_default_str();
  gen->add_option("--seed", scen_seed, "Seed")->capture_default_str();
  gen->add_option("-o,--out", out, "Output file (- for stdout)");

  // pool
  auto* pool_cmd = app.add_subcommand("pool", "Configuration pool for an instance");
  std::string instance_path;
  int count = 6, path_k = 5;
  double time_budget = 300.0;
  std::uint64_t max_nodes = 0;
  std::string lp_out;
  pool_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  pool_cmd->add_option("--count", count, "Configurations to generate")->capture_default_str();
  pool_cmd->add_option("--path-k", path_k, "Candidate paths per node pair")->capture_default_str();
  pool_cmd->add_option("--time-budget", time_budget, "Seconds per solve")->capture_default_str();
  pool_cmd->add_option("--max-nodes", max_nodes, "Search nodes per solve (0 = unlimited)");
  pool_cmd->add_option("--export-lp", lp_out, "Also write the placement model in LP format");
  pool_cmd->add_option("-o,--out", out, "Output file (- for stdout)");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Defense schedule without configurations");
  std::string scenarios_path;
  int beta = 4;
  int sched_horizon = 0;
  bool no_preprocess = false;
  sched->add_option("--scenarios", scenarios_path, "Scenario JSON")->required();
  sched->add_option("--beta", beta, "Defender budget")->capture_default_str();
  sched->add_option("--T", sched_horizon, "Horizon (default: from scenarios)");
  sched->add_flag("--no-preprocess", no_preprocess, "Keep every start variable");
  sched->add_option("--time-budget", time_budget, "Solver seconds")->capture_default_str();
  sched->add_option("--max-nodes", max_nodes, "Search nodes (0 = unlimited)");
  sched->add_option("--export-lp", lp_out, "Also write the model in LP format");
  sched->add_option("-o,--out", out, "Output file (- for stdout)");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Defense schedule with configuration assignment");
  std::string pool_path, schedule_path;
  double kappa = 0.15;
  plan_cmd->add_option("--pool", pool_path, "Pool JSON")->required();
  plan_cmd->add_option("--scenarios", scenarios_path, "Scenario JSON")->required();
  plan_cmd->add_option("--schedule", schedule_path, "Schedule JSON supplying T and beta");
  plan_cmd->add_option("--beta", beta, "Defender budget")->capture_default_str();
  plan_cmd->add_option("--T", sched_horizon, "Horizon (default: from scenarios)");
  plan_cmd->add_option("--kappa", kappa, "Minimum distance between consecutive configurations")
      ->capture_default_str();
  plan_cmd->add_flag("--no-preprocess", no_preprocess, "Keep every start variable");
  plan_cmd->add_option("--time-budget", time_budget, "Solver seconds")->capture_default_str();
  plan_cmd->add_option("--max-nodes", max_nodes, "Search nodes (0 = unlimited)");
  plan_cmd->add_option("--export-lp", lp_out, "Also write the model in LP format");
  plan_cmd->add_option("-o,--out", out, "Output file (- for stdout)");

  // metrics
  auto* met = app.add_subcommand("metrics", "Recompute metrics from artifacts");
  std::string plan_path;
  met->add_option("--plan", plan_path, "Plan JSON")->required();
  met->add_option("--pool", pool_path, "Pool JSON")->required();
  met->add_option("--scenarios", scenarios_path, "Scenario JSON")->required();
  met->add_option("-o,--out", out, "Output file (- for stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Seeded experiment sweep");
  std::string config_path, preset_name, run_dir;
  std::vector<std::string> overrides;
  int workers = 0;
  sweep->add_option("--config", config_path, "key = value config file");
  sweep->add_option("--preset", preset_name, "desk or full (ignored with --config)");
  sweep->add_option("--set", overrides, "Override, key=value (repeatable)");
  sweep->add_option("--run-dir", run_dir, "Directory for artifacts, CSV and TSV");
  sweep->add_option("--workers", workers, "Parallel workers (overrides config)");
  sweep->add_flag("--print-config", "Print the effective config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*topo) {
      Rng trng(derive_seed(topo_seed, stream::kTopology, 0));
      io::InstanceDoc doc;
      doc.seed = topo_seed;
      doc.network = generate_topology(nodes, connectivity, trng, doc.network_ranges);
      if (density < 1.0) {
        Rng crng(derive_seed(topo_seed, stream::kTopology, 1));
        assign_capabilities(doc.network, services, density, crng);
      }
      Rng orng(derive_seed(topo_seed, stream::kOverlay, 0));
      doc.overlay = generate_overlay(services, demands, orng, doc.overlay_ranges);
      emit(out, io::to_json(doc));
    } else if (*gen) {
      TimingParams timing{horizon, scale, scen_seed};
      std::vector<ScenarioKind> kinds;
      int per = per_kind;
      if (kind_names.size() == 1 && kind_names[0] == "mixed") {
        Rng pick(derive_seed(scen_seed, stream::kScenarioSet, 0));
        for (int i = 0; i < per_kind; ++i)
          kinds.push_back(kAllScenarioKinds[pick.uniform_int(0, std::size(kAllScenarioKinds) - 1)]);
        per = 1;
      } else {
        for (const auto& k : kind_names) kinds.push_back(parse_scenario_kind(k));
      }
      io::ScenarioDoc doc{horizon, scale, scen_seed, generate_scenario_set(kinds, per, timing)};
      emit(out, io::to_json(doc));
    } else if (*pool_cmd) {
      auto inst = io::instance_from_json(read_doc(instance_path), source_name(instance_path));
      PathCatalog paths = enumerate_paths(inst.network, path_k);
      if (!lp_out.empty())
        write_text(lp_out, milp::export_lp(build_jsar(inst.network, inst.overlay, paths).program));
      Pool pool = generate_pool(inst.network, inst.overlay, paths, count,
                                limits_from(time_budget, max_nodes));
      io::PoolDoc doc;
      doc.seed = inst.seed;
      doc.network_ranges = inst.network_ranges;
      doc.overlay_ranges = inst.overlay_ranges;
      doc.path_k = path_k;
      doc.paths = paths;
      doc.configurations = pool.configs;
      doc.status = std::string(milp::to_string(pool.last_status));
      doc.exhausted = pool.exhausted;
      doc.report = pool.report;
      doc.instance_ref = instance_path == "-" ? "" : instance_path;
      for (const auto& c : pool.configs)
        if (auto err = validate_configuration(inst.network, inst.overlay, paths, c))
          throw std::logic_error("pool member failed validation: " + *err);
      emit(out, io::to_json(doc));
      if (!pool.report.empty()) std::cerr << "pool: " << pool.report << '\n';
      if (pool.configs.empty())
        return pool.last_status == milp::SolveStatus::BudgetExceeded ? kExitBudget : kExitError;
    } else if (*sched) {
      auto sc = io::scenarios_from_json(read_doc(scenarios_path), source_name(scenarios_path));
      PlschInstance inst = instance_from(sc, sched_horizon, beta);
      PlschModel model = build_plsch(inst, PlschOptions{!no_preprocess});
      if (!lp_out.empty()) write_text(lp_out, milp::export_lp(model.program));
      milp::Solution sol = solve_or_fail(model.program, limits_from(time_budget, max_nodes));
      DefenseSchedule s = extract_schedule(inst, model, sol);
      if (auto err = validate_schedule(inst, s)) throw std::logic_error("invalid schedule: " + *err);
      emit(out, io::schedule_to_json(s, inst.horizon, inst.budget));
    } else if (*plan_cmd) {
      auto pool = io::pool_from_json(read_doc(pool_path), source_name(pool_path));
      auto sc = io::scenarios_from_json(read_doc(scenarios_path), source_name(scenarios_path));
      int h = sched_horizon;
      if (!schedule_path.empty()) {
        int sb = 0;
        io::schedule_from_json(read_doc(schedule_path), source_name(schedule_path), &h, &sb);
        if (plan_cmd->count("--beta") == 0) beta = sb;
      }
      if (pool.configurations.empty()) throw CommandError(pool_path + ": pool is empty");
      MtdInstance inst{instance_from(sc, h, beta), pool.configurations,
                       eligibility_matrix(pool.configurations, kappa)};
      MtdModel model = build_composite(inst, PlschOptions{!no_preprocess});
      if (!lp_out.empty()) write_text(lp_out, milp::export_lp(model.plsch.program));
      milp::Solution sol = solve_or_fail(model.plsch.program, limits_from(time_budget, max_nodes));
      MtdPlan plan = extract_plan(inst, model, sol);
      if (static_cast<int>(inst.pool.size()) < beta || !has_eligible_path(inst.eligibility, beta - 1)) {
        plan.config_starved = true;
        std::cerr << "plan: configuration-starved (eligible pairs cannot chain " << beta
                  << " actions)\n";
      }
      emit(out, io::to_json(io::PlanDoc{inst.plsch.horizon, beta, plan, kappa,
                                        source_name(pool_path)}));
    } else if (*met) {
      auto plan = io::plan_from_json(read_doc(plan_path), source_name(plan_path));
      auto pool = io::pool_from_json(read_doc(pool_path), source_name(pool_path));
      auto sc = io::scenarios_from_json(read_doc(scenarios_path), source_name(scenarios_path));
      if (pool.configurations.empty()) throw CommandError(pool_path + ": pool is empty");
      MtdInstance inst{instance_from(sc, plan.horizon, plan.budget), pool.configurations,
                       eligibility_matrix(pool.configurations, plan.kappa)};
      if (auto err = validate_plan(inst, plan.plan))
        throw CommandError(source_name(plan_path) + ": plan is invalid: " + *err);
      MetricReport r = evaluate(inst, plan.plan);
      r.pool_ref = source_name(pool_path);
      r.plan_ref = source_name(plan_path);
      r.scenarios_ref = source_name(scenarios_path);
      emit(out, io::to_json(r));
    } else if (*sweep) {
      ExperimentConfig cfg = !config_path.empty() ? load_config(config_path)
                             : !preset_name.empty() ? preset(preset_name)
                                                    : ExperimentConfig{};
      for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (workers > 0) cfg.workers = workers;
      cfg.validate();
      if (sweep->count("--print-config")) {
        std::cout << dump_config(cfg);
        return 0;
      }
      RunResult result = run(cfg, run_dir);
      write_csv(std::cout, result);
    }
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
