#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "osfrl/config.hpp"
#include "osfrl/harness.hpp"
#include "osfrl/oracle.hpp"
#include "osfrl/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInvariant = 3;

void apply_out_override(osfrl::CliConfig& cfg, const std::string& flag_out) {
  if (!flag_out.empty()) cfg.out_dir = flag_out;
  if (const char* env = std::getenv("OSFRL_OUT")) {
    if (*env) cfg.out_dir = env;
  }
}

int cmd_run(const std::string& path, const std::string& out, long long seed,
            int reps, int workers) {
  osfrl::CliConfig cfg = osfrl::parse_cli_file(path);
  if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
  if (reps > 0) cfg.reps = reps;
  if (workers > 0) cfg.workers = workers;
  apply_out_override(cfg, out);
  const osfrl::ExperimentConfig ec = osfrl::to_experiment(cfg);
  const osfrl::ExperimentOutput result = osfrl::run_experiment(ec);
  osfrl::write_outputs(ec, result, osfrl::emit_config(cfg));
  std::printf("wrote results.csv, summary.csv, manifest.txt to %s\n",
              ec.out_dir.c_str());
  for (const auto& s : result.summary) {
    std::printf("%-8s mean_cost=%.1f sd=%.1f mean_regret=%.1f\n",
                s.agent.c_str(), s.mean_cost, s.sd_cost, s.mean_regret);
  }
  return kExitOk;
}

int cmd_table(int id, int reps, const std::string& out, int workers) {
  const int hs[] = {1, 3, 5};
  const long ks[] = {100, 500, 2000};
  std::printf("table %d (%d replications per cell)\n", id, reps);
  std::printf("%-4s %-6s %-10s", "H", "K", "OPT");
  osfrl::CliConfig probe = osfrl::table_preset(id, 1, 100);
  for (const auto& a : probe.agents) std::printf(" %-10s", a.c_str());
  std::printf("\n");
  for (int H : hs) {
    for (long K : ks) {
      osfrl::CliConfig cfg = osfrl::table_preset(id, H, K);
      cfg.reps = reps;
      if (workers > 0) cfg.workers = workers;
      apply_out_override(cfg, out.empty() ? cfg.out_dir
                                          : out + "/table" + std::to_string(id) +
                                                "_H" + std::to_string(H) + "_K" +
                                                std::to_string(K));
      const osfrl::ExperimentConfig ec = osfrl::to_experiment(cfg);
      const osfrl::ExperimentOutput result = osfrl::run_experiment(ec);
      osfrl::write_outputs(ec, result, osfrl::emit_config(cfg));
      std::printf("%-4d %-6ld", H, K);
      for (const auto& s : result.summary) std::printf(" %-10.1f", s.mean_cost);
      std::printf("\n");
      std::fflush(stdout);
    }
  }
  return kExitOk;
}

int cmd_verify(bool quick) {
  const auto results = osfrl::run_verification(quick);
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("%-45s %s\n", r.name.c_str(), r.passed ? "ok" : "FAILED");
    if (!r.passed) {
      std::printf("    %s\n", r.detail.c_str());
      all_ok = false;
    }
  }
  std::printf("%zu checks, %s\n", results.size(), all_ok ? "all passed" : "FAILURES");
  return all_ok ? kExitOk : kExitInvariant;
}

int cmd_oracle(const std::string& path) {
  const osfrl::ExperimentConfig ec = osfrl::parse_config(path);
  const osfrl::OptimalSolution sol = osfrl::compute_optimal_q(ec.spec);
  for (int h = 0; h < ec.spec.H; ++h) {
    std::fprintf(stderr, "S*_%d = %s\n", h + 1,
                 osfrl::format_double(sol.base_stock_level(h)).c_str());
  }
  std::printf("h,y,q_star\n");
  for (int h = 0; h < ec.spec.H; ++h) {
    for (int a = 0; a < ec.spec.grid.count; ++a) {
      std::printf("%d,%s,%s\n", h + 1,
                  osfrl::format_double(ec.spec.grid.level(a)).c_str(),
                  osfrl::format_double(sol.q_star[h][a]).c_str());
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation lab for elimination-based half-Q-learning"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  long long run_seed = -1;
  int run_reps = 0, run_workers = 0;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", run_config, "key=value config file")->required();
  run->add_option("--out", run_out, "output directory override");
  run->add_option("--seed", run_seed, "base seed override");
  run->add_option("--reps", run_reps, "replication count override");
  run->add_option("--workers", run_workers, "worker pool size override");

  int table_id = 0, table_reps = 300, table_workers = 0;
  std::string table_out;
  auto* table = app.add_subcommand("table", "reproduce a benchmark table");
  table->add_option("id", table_id, "table id (2-5)")
      ->required()
      ->check(CLI::Range(2, 5));
  table->add_option("--reps", table_reps, "replications per cell (default 300)");
  table->add_option("--out", table_out, "output directory root");
  table->add_option("--workers", table_workers, "worker pool size");

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_flag("--quick", quick, "skip slow integration checks");

  std::string oracle_config;
  auto* oracle = app.add_subcommand("oracle", "print the clairvoyant solution");
  oracle->add_option("config", oracle_config, "key=value config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_config, run_out, run_seed, run_reps, run_workers);
    }
    if (table->parsed()) {
      return cmd_table(table_id, table_reps, table_out, table_workers);
    }
    if (verify->parsed()) return cmd_verify(quick);
    if (oracle->parsed()) return cmd_oracle(oracle_config);
  } catch (const osfrl::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
