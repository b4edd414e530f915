#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "osfrl/harness.hpp"

using namespace osfrl;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.spec.kind = EnvKind::backlogged;
  cfg.spec.feedback = Feedback::full;
  cfg.spec.H = 2;
  cfg.spec.grid = build_action_grid(4.0, 0.5);
  cfg.spec.demand.kind = DemandKind::uniform_offset;
  cfg.spec.demand.offset = {1.5, 1.0};
  cfg.spec.demand.width = 1.0;
  cfg.spec.costs = CostParams::uniform(2, 2.0, 10.0, 0.0);
  cfg.agents = {{AgentKind::fql, {}}, {AgentKind::hql, {}}};
  cfg.K = 20;
  cfg.reps = 4;
  cfg.base_seed = 9;
  return cfg;
}

RunResult stub(const std::string& agent, double cost, double regret) {
  RunResult r;
  r.agent = agent;
  r.total_cost = cost;
  r.opt_cost = cost - regret;
  r.regret = regret;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run_episode charges the true cost of the played action") {
  EnvSpec spec;
  spec.kind = EnvKind::backlogged;
  spec.feedback = Feedback::full;
  spec.H = 1;
  spec.grid = build_action_grid(2.0, 1.0);
  spec.demand.kind = DemandKind::uniform_offset;
  spec.demand.offset = {0.0};
  spec.demand.width = 1.0;
  spec.costs = CostParams::uniform(1, 2.0, 10.0, 0.0);
  spec.validate();
  FqlAgent agent(spec, 10);
  EpisodeRandomness rnd;
  rnd.demand = {0.5};
  // episode 1: all Q equal, FQL ties high and orders up to 2
  CHECK(run_episode(agent, spec, rnd, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("summarize") {
  std::vector<RunResult> rs = {stub("a", 5.0, 1.0), stub("a", 5.0, 1.0),
                               stub("a", 5.0, 1.0), stub("b", 1.0, 0.0),
                               stub("b", 3.0, 2.0)};
  const auto rows = summarize(rs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].agent == "a");
  CHECK(rows[0].reps == 3);
  CHECK(rows[0].mean_cost == doctest::Approx(5.0));
  CHECK(rows[0].sd_cost == doctest::Approx(0.0));
  CHECK_FALSE(rows[0].degenerate);
  CHECK(rows[1].mean_cost == doctest::Approx(2.0));
  CHECK(rows[1].sd_cost == doctest::Approx(std::sqrt(2.0)));
  CHECK(rows[1].mean_regret == doctest::Approx(1.0));

  const auto single = summarize({stub("x", 2.0, 0.5)});
  CHECK(single[0].degenerate);
  CHECK(single[0].sd_cost == doctest::Approx(0.0));

  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("common random numbers pair agents with the clairvoyant") {
  ExperimentConfig cfg = small_config();
  cfg.reps = 1;
  const ExperimentOutput out = run_experiment(cfg);
  REQUIRE(out.results.size() == 3);  // opt + 2 agents
  CHECK(out.results[0].agent == "opt");
  CHECK(out.results[0].regret == 0.0);
  for (const auto& r : out.results) {
    CHECK(r.seed == out.results[0].seed);
    CHECK(r.opt_cost == out.results[0].total_cost);
  }
}

TEST_CASE("experiment output is reproducible") {
  const ExperimentConfig cfg = small_config();
  const ExperimentOutput a = run_experiment(cfg);
  const ExperimentOutput b = run_experiment(cfg);
  REQUIRE(a.results.size() == b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].agent == b.results[i].agent);
    CHECK(a.results[i].total_cost == b.results[i].total_cost);
  }
}

TEST_CASE("replication-major ordering with a leading opt row") {
  const ExperimentConfig cfg = small_config();
  const ExperimentOutput out = run_experiment(cfg);
  REQUIRE(out.results.size() == static_cast<std::size_t>(cfg.reps) * 3);
  for (int r = 0; r < cfg.reps; ++r) {
    CHECK(out.results[r * 3].agent == "opt");
    CHECK(out.results[r * 3].rep == r);
    CHECK(out.results[r * 3 + 1].agent == "fql");
    CHECK(out.results[r * 3 + 2].agent == "hql");
  }
}

TEST_CASE("regret curve of the clairvoyant is identically zero") {
  ExperimentConfig cfg = small_config();
  cfg.reps = 2;
  const ExperimentOutput out = run_experiment(cfg, true);
  const auto curve = regret_curve(out.results, "opt");
  REQUIRE(curve.size() == static_cast<std::size_t>(cfg.K));
  for (double v : curve) CHECK(v == doctest::Approx(0.0));
  const auto fql = regret_curve(out.results, "fql");
  CHECK(fql.size() == static_cast<std::size_t>(cfg.K));
  CHECK_THROWS_AS(regret_curve(out.results, "nope"), std::invalid_argument);
  CHECK_THROWS_AS(regret_curve(run_experiment(cfg).results, "fql"),
                  std::invalid_argument);
}

TEST_CASE("format_double") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-4.25) == "-4.25");
  CHECK(format_double(1234.5678901234) == "1234.56789");  // 10 significant digits
}

TEST_CASE("write_outputs emits the documented files") {
  namespace fs = std::filesystem;
  ExperimentConfig cfg = small_config();
  cfg.out_dir = (fs::temp_directory_path() / "osfrl_test_out").string();
  fs::remove_all(cfg.out_dir);
  const ExperimentOutput out = run_experiment(cfg);
  write_outputs(cfg, out, "env.kind=backlogged\n");

  const std::string results = slurp(fs::path(cfg.out_dir) / "results.csv");
  const std::string summary = slurp(fs::path(cfg.out_dir) / "summary.csv");
  const std::string manifest = slurp(fs::path(cfg.out_dir) / "manifest.txt");

  CHECK(results.rfind("algorithm,H,K,rep,seed,total_cost,opt_cost,regret\n", 0) == 0);
  CHECK(summary.rfind("algorithm,H,K,mean_cost,sd_cost,mean_regret,sd_regret\n", 0) == 0);
  CHECK(manifest.find("base_seed=9") != std::string::npos);
  CHECK(manifest.find("env.kind=backlogged") != std::string::npos);

  const auto lines = static_cast<std::size_t>(
      std::count(results.begin(), results.end(), '\n'));
  CHECK(lines == 1 + static_cast<std::size_t>(cfg.reps) * 3);
  CHECK(results.find("\r") == std::string::npos);
  fs::remove_all(cfg.out_dir);
}
