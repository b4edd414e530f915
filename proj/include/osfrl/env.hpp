#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osfrl/rng.hpp"

namespace osfrl {

enum class EnvKind { backlogged, lost_sales, auction, lower_bound };
enum class Feedback { bandit, lower_one_sided, higher_one_sided, full };

// Uniformly spaced order-up-to levels (or reserve prices) on [0, M].
struct ActionGrid {
  double max_level = 0.0;
  double step = 1.0;
  int count = 1;

  double level(int i) const { return static_cast<double>(i) * step; }

  // Smallest index with level(i) >= x; 0 when x <= 0; count when x > M.
  int ceil_index(double x) const;

  int clamp_index(int i) const {
    if (i < 0) return 0;
    if (i >= count) return count - 1;
    return i;
  }
};

ActionGrid build_action_grid(double max_level, double step);

// Per-stage cost coefficients (index 0 = stage 1). salvage is the unit
// credit for inventory left at the end of the episode.
struct CostParams {
  std::vector<double> holding;
  std::vector<double> backlog;
  std::vector<double> penalty;
  std::vector<double> purchase;
  double salvage = 0.0;

  static CostParams uniform(int H, double o, double b, double p, double c = 0.0,
                            double salvage = 0.0);
};

// Folds unit purchasing costs into holding/backlog/penalty coefficients
// by telescoping, leaving purchase == 0. Throws if an adjusted
// coefficient would go negative.
CostParams amortize_costs(const CostParams& costs, int H);

enum class DemandKind { uniform_offset, two_point };

struct DemandModel {
  DemandKind kind = DemandKind::uniform_offset;
  // uniform-offset: D_h ~ offset[h] + width * U[0,1)
  std::vector<double> offset;
  double width = 1.0;
  // two-point: D_h = low[h] w.p. p_low, else high[h]
  std::vector<double> low;
  std::vector<double> high;
  double p_low = 0.5;

  double support_lo(int h) const;
  double support_hi(int h) const;
};

// Maps a uniform draw u in [0,1) to a demand realization for stage h.
double sample_demand(int h, const DemandModel& model, double u);

struct EnvSpec {
  EnvKind kind = EnvKind::backlogged;
  int H = 1;
  ActionGrid grid;
  DemandModel demand;
  CostParams costs;
  Feedback feedback = Feedback::full;
  int bidders = 3;  // auction only

  bool stateless() const { return kind == EnvKind::auction; }
  bool uses_backlog_dynamics() const {
    return kind == EnvKind::backlogged || kind == EnvKind::lower_bound;
  }
  void validate() const;  // throws std::invalid_argument
};

// Realized per-stage randomness for one episode; demands for inventory
// environments, bidder value vectors for auctions.
struct EpisodeRandomness {
  std::vector<double> demand;               // size H
  std::vector<std::vector<double>> values;  // size H (auction only)
};

EpisodeRandomness draw_episode(const EnvSpec& spec, const CounterRng& rng,
                               std::uint64_t rep, std::uint64_t episode);

struct StepOutcome {
  double next_state = 0.0;
  double reward = 0.0;
};

StepOutcome step_backlogged(int h, double y, double d, const CostParams& costs);
StepOutcome step_lost_sales(int h, double y, double d, const CostParams& costs);
StepOutcome step_auction(double reserve, const std::vector<double>& values);

// Dispatches on spec.kind; reward is the learning reward (the
// observable pseudo-reward for lost sales).
StepOutcome step_stage(const EnvSpec& spec, int h, double y,
                       const EpisodeRandomness& rnd);

// Realized cost under full knowledge of the randomness. Differs from
// -reward only for lost sales, where the unobserved excess demand is
// charged at the penalty rate, and for auctions the cost is the
// negated revenue.
double true_stage_cost(const EnvSpec& spec, int h, double y,
                       const EpisodeRandomness& rnd);

// Contiguous feasible index range [lo, hi] on the grid; empty when
// x exceeds the top of the grid (cannot occur under the provided
// dynamics, flagged for callers).
struct IndexRange {
  int lo = 0;
  int hi = -1;
  bool empty() const { return lo > hi; }
};

IndexRange feasible_actions(double x, const EnvSpec& spec);

// Outcome at query action iff the feedback model makes it observable
// after playing `chosen`; nullopt otherwise.
std::optional<StepOutcome> observe_counterfactual(const EnvSpec& spec, int h,
                                                  double chosen, double query,
                                                  const EpisodeRandomness& rnd);

// Scaled-down two-point instance: demand at stage h (1-based) is
// h*scale + 1 w.p. 0.5 + 1/sqrt(K), else h*scale + 2; holding and
// backlog costs both 1, full feedback.
EnvSpec make_lower_bound_env(int H, long K, double scale = 0.1);

std::string to_string(EnvKind k);
std::string to_string(Feedback f);
std::string to_string(DemandKind k);

}  // namespace osfrl
