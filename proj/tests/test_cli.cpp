// Drives the built mtdctl binary through its subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs mtdctl with `args` inside `dir`; stderr is folded into stdout when asked.
Result mtdctl(const fs::path& dir, const std::string& args, bool with_stderr = false) {
  std::string cmd = "cd '" + dir.string() + "' && '" MTDCTL_PATH "' " + args +
                    (with_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

struct Workdir {
  fs::path path;
  explicit Workdir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("pipeline through files") {
  Workdir w("mtdctl_pipeline");
  REQUIRE(mtdctl(w.path, "gen-topology --nodes 6 --services 4 --demands 3 --seed 2 -o inst.json").code == 0);
  auto inst = load(w.path / "inst.json");
  CHECK(inst["network"]["nodes"].size() == 6);
  CHECK(inst["overlay"]["demands"].size() == 3);

  REQUIRE(mtdctl(w.path, "pool --instance inst.json --count 5 --export-lp jsar.lp -o pool.json").code == 0);
  auto pool = load(w.path / "pool.json");
  CHECK(pool["configurations"].size() == 5);
  CHECK(pool["instance_ref"] == "inst.json");
  CHECK(fs::file_size(w.path / "jsar.lp") > 0);

  REQUIRE(mtdctl(w.path, "gen-scenarios --kind calibrated,zeroday --per-kind 1 --T 20 --lambda 20 --seed 4 -o sc.json").code == 0);
  auto sc = load(w.path / "sc.json");
  REQUIRE(sc["scenarios"].size() == 2);
  CHECK(sc["scenarios"][0]["kind"] == "calibrated");
  CHECK(sc["scenarios"][1]["kind"] == "zeroday");

  REQUIRE(mtdctl(w.path, "schedule --scenarios sc.json --beta 3 --export-lp plsch.lp -o sched.json").code == 0);
  auto sched = load(w.path / "sched.json");
  CHECK(sched["beta"] == 3);
  CHECK(sched["T"] == 20);
  std::ifstream lp(w.path / "plsch.lp");
  std::string first;
  std::getline(lp, first);
  std::getline(lp, first);
  CHECK(first == "Maximize");

  REQUIRE(mtdctl(w.path, "plan --pool pool.json --scenarios sc.json --schedule sched.json --kappa 0.0 -o plan.json").code == 0);
  auto plan = load(w.path / "plan.json");
  CHECK(plan["pool_ref"] == "pool.json");
  CHECK(plan["kappa"] == 0.0);
  // five distinct configurations and kappa 0 leave the plain optimum intact
  CHECK(plan["objective"] == sched["objective"]);

  auto m = mtdctl(w.path, "metrics --plan plan.json --pool pool.json --scenarios sc.json");
  REQUIRE(m.code == 0);
  auto metrics = json::parse(m.out);
  CHECK(metrics["poec"] == 1.0);
  CHECK(metrics["act"].get<double>() >= 0.0);
  CHECK(metrics["inputs"]["plan"] == "plan.json");
}

TEST_CASE("stdin and stdout") {
  Workdir w("mtdctl_stdio");
  auto r = mtdctl(w.path, "gen-scenarios --kind ransomware --T 60 --lambda 60 --seed 7 | '" MTDCTL_PATH
                          "' schedule --scenarios - --beta 2");
  REQUIRE(r.code == 0);
  auto s = json::parse(r.out);
  CHECK(s["actions"].size() <= 2);
  CHECK(s["objective"].get<int>() > 0);
}

TEST_CASE("generation is reproducible") {
  Workdir w("mtdctl_repro");
  auto a = mtdctl(w.path, "gen-topology --seed 11");
  auto b = mtdctl(w.path, "gen-topology --seed 11");
  auto c = mtdctl(w.path, "gen-topology --seed 12");
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("errors and exit codes") {
  Workdir w("mtdctl_errors");
  {
    std::ofstream(w.path / "bad.json") << "{\"T\": 5,";
  }
  auto r = mtdctl(w.path, "schedule --scenarios bad.json --beta 1", true);
  CHECK(r.code == 1);
  CHECK(r.out.find("bad.json: syntax error at byte") != std::string::npos);

  {
    std::ofstream(w.path / "shape.json") << R"({"T": 5, "lambda": 5, "seed": 1, "scenarios": 3})";
  }
  r = mtdctl(w.path, "schedule --scenarios shape.json --beta 1", true);
  CHECK(r.code == 1);
  CHECK(r.out.find("shape.json: /scenarios: expected an array") != std::string::npos);

  r = mtdctl(w.path, "schedule --scenarios missing.json --beta 1", true);
  CHECK(r.code == 1);
  CHECK(r.out.find("missing.json") != std::string::npos);

  r = mtdctl(w.path, "gen-topology --seed 1 -o inst.json");
  REQUIRE(r.code == 0);
  r = mtdctl(w.path, "pool --instance inst.json --count 3 --max-nodes 1", true);
  CHECK(r.code == 3);

  r = mtdctl(w.path, "sweep --set nonsense=1", true);
  CHECK(r.code == 1);
  CHECK(r.out.find("unknown key") != std::string::npos);

  r = mtdctl(w.path, "schedule --beta", true);
  CHECK(r.code != 0);
}

TEST_CASE("sweep writes the CSV and artifacts") {
  Workdir w("mtdctl_sweep");
  {
    std::ofstream(w.path / "exp.cfg") << "preset = desk\nseeds = 1-2\nbeta = 2\nkappa = 0.1, 0.3\n";
  }
  auto r = mtdctl(w.path, "sweep --config exp.cfg --run-dir out --workers 2");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "seed,scenario_kinds,T,lambda,beta,kappa,pool_size,poec,por,act,solve_status,solve_seconds");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 4);
  CHECK(fs::exists(w.path / "out" / "results.csv"));
  CHECK(fs::exists(w.path / "out" / "seed_2" / "beta_2_kappa_0.3" / "metrics.json"));

  auto printed = mtdctl(w.path, "sweep --preset full --set beta=4-6 --print-config");
  REQUIRE(printed.code == 0);
  CHECK(printed.out.find("beta = 4,5,6\n") != std::string::npos);
  CHECK(printed.out.find("n_nodes = 20\n") != std::string::npos);
}

TEST_CASE("metrics recomputation matches the sweep") {
  Workdir w("mtdctl_recompute");
  auto r = mtdctl(w.path, "sweep --preset desk --set seeds=3 --run-dir out");
  REQUIRE(r.code == 0);
  auto point = w.path / "out" / "seed_3" / "beta_4_kappa_0.15";
  auto again = mtdctl(point, "metrics --plan plan.json --pool pool.json --scenarios ../scenarios.json");
  REQUIRE(again.code == 0);
  auto stored = load(point / "metrics.json");
  auto fresh = json::parse(again.out);
  CHECK(fresh["act"] == stored["act"]);
  CHECK(fresh["poec"] == stored["poec"]);
  CHECK(fresh["por"] == stored["por"]);
}
