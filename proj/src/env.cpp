#include "osfrl/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osfrl {

int ActionGrid::ceil_index(double x) const {
  if (x <= 0.0) return 0;
  const int i = static_cast<int>(std::ceil(x / step - 1e-9));
  if (i < 0) return 0;
  if (i > count) return count;
  return i;
}

ActionGrid build_action_grid(double max_level, double step) {
  if (max_level < 0.0 || step <= 0.0) {
    throw std::invalid_argument("build_action_grid: M >= 0 and step > 0 required");
  }
  const double ratio = max_level / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("build_action_grid: M must be divisible by step");
  }
  ActionGrid g;
  g.max_level = max_level;
  g.step = step;
  g.count = static_cast<int>(rounded) + 1;
  return g;
}

CostParams CostParams::uniform(int H, double o, double b, double p, double c,
                               double salvage) {
  CostParams cp;
  cp.holding.assign(H, o);
  cp.backlog.assign(H, b);
  cp.penalty.assign(H, p);
  cp.purchase.assign(H, c);
  cp.salvage = salvage;
  return cp;
}

CostParams amortize_costs(const CostParams& costs, int H) {
  CostParams out = costs;
  for (int h = 0; h < H; ++h) {
    const double c_h = costs.purchase[h];
    const double c_next = (h + 1 < H) ? costs.purchase[h + 1] : costs.salvage;
    out.holding[h] = costs.holding[h] + c_h - c_next;
    out.backlog[h] = costs.backlog[h] - c_h;
    out.penalty[h] = costs.penalty[h] - c_h;
    out.purchase[h] = 0.0;
    if (out.holding[h] < 0.0 || out.backlog[h] < 0.0 || out.penalty[h] < 0.0) {
      throw std::invalid_argument(
          "amortize_costs: adjusted cost coefficient is negative");
    }
  }
  out.salvage = 0.0;
  return out;
}

double DemandModel::support_lo(int h) const {
  return kind == DemandKind::uniform_offset ? offset[h] : low[h];
}

double DemandModel::support_hi(int h) const {
  return kind == DemandKind::uniform_offset ? offset[h] + width : high[h];
}

double sample_demand(int h, const DemandModel& model, double u) {
  if (model.kind == DemandKind::uniform_offset) {
    return model.offset[h] + model.width * u;
  }
  return u < model.p_low ? model.low[h] : model.high[h];
}

void EnvSpec::validate() const {
  if (H < 1) throw std::invalid_argument("EnvSpec: H must be >= 1");
  if (grid.count < 1) throw std::invalid_argument("EnvSpec: empty grid");
  const auto ok = [&](std::initializer_list<Feedback> allowed) {
    for (Feedback f : allowed) {
      if (feedback == f) return true;
    }
    return false;
  };
  switch (kind) {
    case EnvKind::backlogged:
    case EnvKind::lower_bound:
      if (!ok({Feedback::full, Feedback::lower_one_sided, Feedback::bandit})) {
        throw std::invalid_argument("EnvSpec: feedback not allowed for backlogged model");
      }
      break;
    case EnvKind::lost_sales:
      if (!ok({Feedback::lower_one_sided, Feedback::bandit})) {
        throw std::invalid_argument("EnvSpec: feedback not allowed for lost-sales model");
      }
      break;
    case EnvKind::auction:
      if (!ok({Feedback::higher_one_sided, Feedback::bandit})) {
        throw std::invalid_argument("EnvSpec: feedback not allowed for auction");
      }
      break;
  }
  if (kind != EnvKind::auction) {
    const std::size_t n = static_cast<std::size_t>(H);
    if (costs.holding.size() != n || costs.backlog.size() != n ||
        costs.penalty.size() != n || costs.purchase.size() != n) {
      throw std::invalid_argument("EnvSpec: cost vectors must have length H");
    }
    if (demand.kind == DemandKind::uniform_offset) {
      if (demand.offset.size() != n || demand.width <= 0.0) {
        throw std::invalid_argument("EnvSpec: bad uniform-offset demand model");
      }
    } else {
      if (demand.low.size() != n || demand.high.size() != n ||
          demand.p_low <= 0.0 || demand.p_low >= 1.0) {
        throw std::invalid_argument("EnvSpec: bad two-point demand model");
      }
      for (int h = 0; h < H; ++h) {
        if (!(demand.low[h] < demand.high[h])) {
          throw std::invalid_argument("EnvSpec: two-point model needs low < high");
        }
      }
    }
  } else if (bidders < 1) {
    throw std::invalid_argument("EnvSpec: auction needs at least one bidder");
  }
}

EpisodeRandomness draw_episode(const EnvSpec& spec, const CounterRng& rng,
                               std::uint64_t rep, std::uint64_t episode) {
  EpisodeRandomness rnd;
  if (spec.kind == EnvKind::auction) {
    rnd.values.resize(spec.H);
    for (int h = 0; h < spec.H; ++h) {
      rnd.values[h].resize(spec.bidders);
      for (int j = 0; j < spec.bidders; ++j) {
        const double u = rng.uniform(rep, episode, static_cast<std::uint64_t>(h),
                                     static_cast<std::uint64_t>(j));
        // bidder values uniform on [0.2*(h+1), 0.2*(h+1) + 1]
        rnd.values[h][j] = 0.2 * (h + 1) + u;
      }
    }
  } else {
    rnd.demand.resize(spec.H);
    for (int h = 0; h < spec.H; ++h) {
      const double u = rng.uniform(rep, episode, static_cast<std::uint64_t>(h), 0);
      rnd.demand[h] = sample_demand(h, spec.demand, u);
    }
  }
  return rnd;
}

StepOutcome step_backlogged(int h, double y, double d, const CostParams& costs) {
  StepOutcome out;
  out.next_state = y - d;
  const double over = std::max(y - d, 0.0);
  const double under = std::max(d - y, 0.0);
  out.reward = -(costs.holding[h] * over + costs.backlog[h] * under);
  return out;
}

StepOutcome step_lost_sales(int h, double y, double d, const CostParams& costs) {
  StepOutcome out;
  out.next_state = std::max(y - d, 0.0);
  const double over = std::max(y - d, 0.0);
  out.reward = -(costs.holding[h] * over - costs.penalty[h] * std::min(y, d));
  return out;
}

StepOutcome step_auction(double reserve, const std::vector<double>& values) {
  StepOutcome out;
  out.next_state = 0.0;
  double best = -1.0, second = -1.0;
  int bids = 0;
  for (double v : values) {
    if (v < reserve) continue;
    ++bids;
    if (v > best) {
      second = best;
      best = v;
    } else if (v > second) {
      second = v;
    }
  }
  if (bids == 0) {
    out.reward = 0.0;
  } else if (bids == 1) {
    out.reward = reserve;
  } else {
    out.reward = second;
  }
  return out;
}

StepOutcome step_stage(const EnvSpec& spec, int h, double y,
                       const EpisodeRandomness& rnd) {
  switch (spec.kind) {
    case EnvKind::backlogged:
    case EnvKind::lower_bound:
      return step_backlogged(h, y, rnd.demand[h], spec.costs);
    case EnvKind::lost_sales:
      return step_lost_sales(h, y, rnd.demand[h], spec.costs);
    case EnvKind::auction:
      return step_auction(y, rnd.values[h]);
  }
  throw std::logic_error("step_stage: unknown environment kind");
}

double true_stage_cost(const EnvSpec& spec, int h, double y,
                       const EpisodeRandomness& rnd) {
  if (spec.kind == EnvKind::lost_sales) {
    const double d = rnd.demand[h];
    return spec.costs.holding[h] * std::max(y - d, 0.0) +
           spec.costs.penalty[h] * std::max(d - y, 0.0);
  }
  return -step_stage(spec, h, y, rnd).reward;
}

IndexRange feasible_actions(double x, const EnvSpec& spec) {
  IndexRange r;
  r.hi = spec.grid.count - 1;
  r.lo = spec.stateless() ? 0 : spec.grid.ceil_index(x);
  return r;
}

std::optional<StepOutcome> observe_counterfactual(const EnvSpec& spec, int h,
                                                  double chosen, double query,
                                                  const EpisodeRandomness& rnd) {
  bool observable = false;
  switch (spec.feedback) {
    case Feedback::full:
      observable = true;
      break;
    case Feedback::lower_one_sided:
      observable = query <= chosen + 1e-12;
      break;
    case Feedback::higher_one_sided:
      observable = query >= chosen - 1e-12;
      break;
    case Feedback::bandit:
      observable = std::abs(query - chosen) <= 1e-12;
      break;
  }
  if (!observable) return std::nullopt;
  return step_stage(spec, h, query, rnd);
}

EnvSpec make_lower_bound_env(int H, long K, double scale) {
  if (K < 16) {
    throw std::invalid_argument("make_lower_bound_env: K must be >= 16");
  }
  if (H < 1 || scale <= 0.0) {
    throw std::invalid_argument("make_lower_bound_env: H >= 1 and scale > 0 required");
  }
  EnvSpec spec;
  spec.kind = EnvKind::lower_bound;
  spec.feedback = Feedback::full;
  spec.H = H;
  spec.demand.kind = DemandKind::two_point;
  spec.demand.p_low = 0.5 + 1.0 / std::sqrt(static_cast<double>(K));
  spec.demand.low.resize(H);
  spec.demand.high.resize(H);
  for (int h = 0; h < H; ++h) {
    spec.demand.low[h] = (h + 1) * scale + 1.0;
    spec.demand.high[h] = (h + 1) * scale + 2.0;
  }
  spec.costs = CostParams::uniform(H, 1.0, 1.0, 1.0);
  spec.grid = build_action_grid(H * scale + 2.0, scale);
  spec.validate();
  return spec;
}

std::string to_string(EnvKind k) {
  switch (k) {
    case EnvKind::backlogged: return "backlogged";
    case EnvKind::lost_sales: return "lost-sales";
    case EnvKind::auction: return "auction";
    case EnvKind::lower_bound: return "lower-bound";
  }
  return "?";
}

std::string to_string(Feedback f) {
  switch (f) {
    case Feedback::bandit: return "bandit";
    case Feedback::lower_one_sided: return "lower-one-sided";
    case Feedback::higher_one_sided: return "higher-one-sided";
    case Feedback::full: return "full";
  }
  return "?";
}

std::string to_string(DemandKind k) {
  return k == DemandKind::uniform_offset ? "uniform-offset" : "two-point";
}

}  // namespace osfrl
