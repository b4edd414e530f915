#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osfrl/agents.hpp"
#include "osfrl/env.hpp"
#include "osfrl/oracle.hpp"

namespace osfrl {

struct AgentConfig {
  AgentKind kind = AgentKind::fql;
  AgentParams params;
};

struct ExperimentConfig {
  EnvSpec spec;
  std::vector<AgentConfig> agents;
  long K = 100;
  int reps = 300;
  std::uint64_t base_seed = 1;
  double x1 = 0.0;
  int workers = 1;
  std::string out_dir = "out";

  void validate() const;
};

struct RunResult {
  std::string agent;
  int rep = 0;
  std::uint64_t seed = 0;
  double total_cost = 0.0;
  double opt_cost = 0.0;
  double regret = 0.0;
  std::vector<double> episode_costs;      // filled when traces requested
  std::vector<double> opt_episode_costs;  // idem
};

struct SummaryRow {
  std::string agent;
  int reps = 0;
  double mean_cost = 0.0;
  double sd_cost = 0.0;
  double mean_regret = 0.0;
  double sd_regret = 0.0;
  bool degenerate = false;  // single replication, SD reported as 0
};

// Runs one episode through the agent protocol and returns the realized
// true cost.
double run_episode(Agent& agent, const EnvSpec& spec,
                   const EpisodeRandomness& rnd, double x1);

struct ExperimentOutput {
  std::vector<RunResult> results;  // replication-major, then agent order,
                                   // with a leading "opt" row per replication
  std::vector<SummaryRow> summary;
};

// Common-random-numbers experiment: every agent and the clairvoyant see
// identical pre-drawn randomness per replication. Output is identical
// for a given config and base_seed regardless of worker count.
ExperimentOutput run_experiment(const ExperimentConfig& config,
                                bool traces = false);

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results);

// Mean cumulative regret per episode index, averaged over the given
// agent's replications (requires traces).
std::vector<double> regret_curve(const std::vector<RunResult>& results,
                                 const std::string& agent);

// Writes results.csv, summary.csv and manifest.txt into config.out_dir.
// `config_echo` is the canonical key=value dump stored in the manifest.
void write_outputs(const ExperimentConfig& config, const ExperimentOutput& out,
                   const std::string& config_echo);

std::string format_double(double v);

}  // namespace osfrl
