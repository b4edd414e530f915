#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "osfrl/harness.hpp"

namespace osfrl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented key=value configuration mirroring the file format.
// Unknown, duplicate and missing keys are rejected at parse time.
struct CliConfig {
  std::string env_kind;  // backlogged | lost-sales | auction | lower-bound
  int H = 0;
  long K = 0;
  std::string feedback;  // resolved to the kind's default when empty

  double cost_o = 0.0;
  double cost_b = 0.0;
  double cost_p = 0.0;
  double cost_c = 0.0;
  double cost_salvage = 0.0;

  std::string demand_kind = "uniform-offset";
  std::string offset_rule;  // decreasing: (10-h)/2, increasing: h
  double width = 1.0;

  double lb_scale = 0.1;  // lower-bound instance scale
  int bidders = 3;        // auction

  double grid_max = 0.0;
  double grid_step = 1.0;

  std::vector<std::string> agents;
  std::string hql_radius_mode = "experiment";
  double qlucb_bonus_scale = 1.0;
  double aggql_agg_step = 1.0;

  int reps = 300;
  std::uint64_t base_seed = 1;
  int workers = 1;
  double x1 = 0.0;
  std::string out_dir = "out";

  bool operator==(const CliConfig&) const = default;
};

CliConfig parse_cli_text(const std::string& text);
CliConfig parse_cli_file(const std::string& path);

// Canonical dump; parse_cli_text(emit_config(c)) == c.
std::string emit_config(const CliConfig& c);

// Builds the runnable experiment (demand vectors, amortized costs,
// resolved feedback). Throws ConfigError on semantic violations.
ExperimentConfig to_experiment(const CliConfig& c);

ExperimentConfig parse_config(const std::string& path);

// Experimental presets for the four benchmark tables:
//   2: backlogged, decreasing demand, grid [0, 10]
//   3: backlogged, increasing demand, grid [0, 2H], 1/2 aggregation
//   4: lost sales, increasing demand, grid [0, 2H], 1/2 aggregation
//   5: lost sales, decreasing demand, grid [0, 10]
CliConfig table_preset(int table_id, int H, long K);

}  // namespace osfrl
