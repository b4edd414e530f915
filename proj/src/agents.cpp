#include "osfrl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osfrl {
namespace {

std::vector<std::vector<double>> optimistic_table(int H, int A) {
  return std::vector<std::vector<double>>(H, std::vector<double>(A, double(H)));
}

// argmax over q[lo..hi], ties toward the smaller index
int argmax_range(const std::vector<double>& q, int lo, int hi) {
  int best = lo;
  for (int i = lo + 1; i <= hi; ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

// ties toward the larger index; keeps the untrained all-equal table
// optimistic in the order-up-to sense, like HQL playing max of its
// running set, instead of opening with the ruinous zero order
int argmax_range_high(const std::vector<double>& q, int lo, int hi) {
  int best = hi;
  for (int i = hi - 1; i >= lo; --i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

}  // namespace

IndexRange shrink_running_set(const std::vector<double>& q, int lo, int hi,
                              double radius) {
  if (lo > hi) throw std::invalid_argument("shrink_running_set: empty set");
  const int star = argmax_range(q, lo, hi);
  IndexRange out;
  out.lo = star;
  out.hi = star;
  while (out.lo > lo && q[star] - q[out.lo - 1] <= radius) --out.lo;
  while (out.hi < hi && q[star] - q[out.hi + 1] <= radius) ++out.hi;
  return out;
}

HqlAgent::HqlAgent(const EnvSpec& spec, long K, AgentParams params)
    : spec_(spec) {
  spec_.validate();
  rate_.H = spec_.H;
  rate_.A = spec_.grid.count;
  rate_.K = K;
  rate_.T = static_cast<long long>(spec_.H) * K;
  rate_.mode = params.radius_mode;
  lo_.assign(spec_.H, 0);
  hi_.assign(spec_.H, spec_.grid.count - 1);
  q_ = optimistic_table(spec_.H, spec_.grid.count);
}

void HqlAgent::force_running_set(int h, int lo, int hi) {
  if (h < 0 || h >= spec_.H || lo < 0 || hi >= spec_.grid.count || lo > hi) {
    throw std::invalid_argument("force_running_set: bad interval");
  }
  lo_[h] = lo;
  hi_[h] = hi;
}

void HqlAgent::begin_episode(double /*x1*/) {
  record_ = EpisodeRandomness{};
  record_.demand.assign(spec_.H, 0.0);
  if (spec_.kind == EnvKind::auction) record_.values.resize(spec_.H);
}

double HqlAgent::select(int h, double x) {
  if (spec_.feedback == Feedback::higher_one_sided) {
    // mirrored rule: smallest running-set action gives the most feedback
    const IndexRange feas = feasible_actions(x, spec_);
    if (feas.empty()) throw std::logic_error("HqlAgent: no feasible action");
    if (lo_[h] >= feas.lo) return spec_.grid.level(lo_[h]);
    return spec_.grid.level(feas.hi);
  }
  const int f = spec_.grid.ceil_index(x);
  if (f >= spec_.grid.count) throw std::logic_error("HqlAgent: no feasible action");
  return spec_.grid.level(hi_[h] >= f ? hi_[h] : f);
}

void HqlAgent::observe(int h, double /*x*/, double /*y*/,
                       const EpisodeRandomness& rnd) {
  if (spec_.kind == EnvKind::auction) {
    record_.values[h] = rnd.values[h];
  } else {
    record_.demand[h] = rnd.demand[h];
  }
}

void HqlAgent::end_episode() {
  const int H = spec_.H;
  const int A = spec_.grid.count;
  const double a_k = alpha(k_, H);
  const double radius = confidence_radius(k_ + 1, rate_);
  std::vector<int> pend_lo(H), pend_hi(H);
  // suffix max of the freshest Q over the episode-k running interval,
  // filled stage by stage as the backward pass completes them
  std::vector<std::vector<double>> suffix(H);

  for (int h = H - 1; h >= 0; --h) {
    for (int idx = lo_[h]; idx <= hi_[h]; ++idx) {
      const StepOutcome first = step_stage(spec_, h, spec_.grid.level(idx), record_);
      double rtil = first.reward;
      double x = first.next_state;
      double vtau = 0.0;
      for (int hp = h + 1; hp < H; ++hp) {
        const int f = spec_.stateless() ? 0 : spec_.grid.ceil_index(x);
        if (f <= hi_[hp]) {  // some running-set action is feasible: tau = hp
          vtau = suffix[hp][std::max(lo_[hp], f)];
          break;
        }
        // forced action: closest feasible action to the running set
        const double yf = spec_.grid.level(spec_.grid.clamp_index(f));
        const StepOutcome out = step_stage(spec_, hp, yf, record_);
        rtil += out.reward;
        x = out.next_state;
      }
      q_[h][idx] = (1.0 - a_k) * q_[h][idx] + a_k * (rtil + vtau);
    }
    suffix[h].assign(A, 0.0);
    double run = q_[h][hi_[h]];
    for (int i = hi_[h]; i >= lo_[h]; --i) {
      run = std::max(run, q_[h][i]);
      suffix[h][i] = run;
    }
    const IndexRange kept = shrink_running_set(q_[h], lo_[h], hi_[h], radius);
    pend_lo[h] = kept.lo;
    pend_hi[h] = kept.hi;
  }
  lo_ = pend_lo;
  hi_ = pend_hi;
  ++k_;
}

double HqlAgent::value_at(int h, double x) const {
  if (h >= spec_.H) return 0.0;
  const int f = spec_.stateless() ? 0 : spec_.grid.ceil_index(x);
  if (f > hi_[h]) {
    throw std::logic_error("HqlAgent::value_at: no running-set action feasible");
  }
  double best = q_[h][std::max(lo_[h], f)];
  for (int i = std::max(lo_[h], f); i <= hi_[h]; ++i) best = std::max(best, q_[h][i]);
  return best;
}

FqlAgent::FqlAgent(const EnvSpec& spec, long K, AgentParams) : spec_(spec) {
  spec_.validate();
  (void)K;
  q_ = optimistic_table(spec_.H, spec_.grid.count);
  suffix_.assign(spec_.grid.count, 0.0);
}

void FqlAgent::begin_episode(double /*x1*/) {}

double FqlAgent::select(int h, double x) {
  const IndexRange feas = feasible_actions(x, spec_);
  if (feas.empty()) throw std::logic_error("FqlAgent: no feasible action");
  return spec_.grid.level(argmax_range_high(q_[h], feas.lo, feas.hi));
}

void FqlAgent::observe(int h, double /*x*/, double /*y*/,
                       const EpisodeRandomness& rnd) {
  const int A = spec_.grid.count;
  const bool terminal = h + 1 >= spec_.H;
  if (!terminal) {
    double run = q_[h + 1][A - 1];
    for (int i = A - 1; i >= 0; --i) {
      run = std::max(run, q_[h + 1][i]);
      suffix_[i] = run;
    }
  }
  const double a = alpha(k_, spec_.H);
  for (int idx = 0; idx < A; ++idx) {
    const StepOutcome out = step_stage(spec_, h, spec_.grid.level(idx), rnd);
    double v = 0.0;
    if (!terminal) {
      const int f = spec_.stateless()
                        ? 0
                        : spec_.grid.clamp_index(spec_.grid.ceil_index(out.next_state));
      v = suffix_[f];
    }
    q_[h][idx] = (1.0 - a) * q_[h][idx] + a * (out.reward + v);
  }
}

void FqlAgent::end_episode() { ++k_; }

double FqlAgent::value_at(int h, double x) const {
  if (h >= spec_.H) return 0.0;
  const IndexRange feas = feasible_actions(x, spec_);
  if (feas.empty()) throw std::logic_error("FqlAgent::value_at: empty feasible set");
  double best = q_[h][feas.lo];
  for (int i = feas.lo; i <= feas.hi; ++i) best = std::max(best, q_[h][i]);
  return best;
}

QlUcbAgent::QlUcbAgent(const EnvSpec& spec, long K, AgentParams params)
    : spec_(spec), bonus_scale_(params.bonus_scale) {
  spec_.validate();
  const double T = static_cast<double>(spec_.H) * static_cast<double>(K);
  iota_ = std::log(static_cast<double>(spec_.grid.count) * T);
  q_ = optimistic_table(spec_.H, spec_.grid.count);
  t_.assign(spec_.H, std::vector<long>(spec_.grid.count, 0));
}

void QlUcbAgent::begin_episode(double /*x1*/) {}

double QlUcbAgent::select(int h, double x) {
  const IndexRange feas = feasible_actions(x, spec_);
  if (feas.empty()) throw std::logic_error("QlUcbAgent: no feasible action");
  return spec_.grid.level(argmax_range(q_[h], feas.lo, feas.hi));
}

void QlUcbAgent::observe(int h, double /*x*/, double y,
                         const EpisodeRandomness& rnd) {
  const int idx = spec_.grid.clamp_index(
      static_cast<int>(std::lround(y / spec_.grid.step)));
  const StepOutcome out = step_stage(spec_, h, spec_.grid.level(idx), rnd);
  double v = 0.0;
  if (h + 1 < spec_.H) {
    const IndexRange feas = feasible_actions(out.next_state, spec_);
    v = q_[h + 1][argmax_range(q_[h + 1], feas.lo, feas.hi)];
  }
  const long t = ++t_[h][idx];
  const double a = alpha(t, spec_.H);
  const double bonus =
      bonus_scale_ * std::sqrt(std::pow(double(spec_.H), 3) * iota_ / t);
  q_[h][idx] = (1.0 - a) * q_[h][idx] + a * (out.reward + v + bonus);
}

AggQlAgent::AggQlAgent(const EnvSpec& spec, long K, AgentParams params)
    : spec_(spec), bonus_scale_(params.bonus_scale) {
  spec_.validate();
  const double ratio = params.agg_step / spec_.grid.step;
  if (params.agg_step <= 0.0 ||
      std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(
        "AggQlAgent: agg_step must be a positive multiple of the grid step");
  }
  ratio_ = static_cast<int>(std::round(ratio));
  cells_ = (spec_.grid.count - 1) / ratio_ + 1;
  const double T = static_cast<double>(spec_.H) * static_cast<double>(K);
  iota_ = std::log(static_cast<double>(spec_.grid.count) * T);
  q_.assign(spec_.H, std::vector<double>(cells_, double(spec_.H)));
  t_.assign(spec_.H, std::vector<long>(cells_, 0));
}

void AggQlAgent::begin_episode(double /*x1*/) {}

double AggQlAgent::select(int h, double x) {
  const IndexRange feas = feasible_actions(x, spec_);
  if (feas.empty()) throw std::logic_error("AggQlAgent: no feasible action");
  const int c = argmax_range(q_[h], cell_of(feas.lo), cells_ - 1);
  // smallest feasible grid action inside the chosen cell
  const int idx = std::max(feas.lo, c * ratio_);
  return spec_.grid.level(idx);
}

void AggQlAgent::observe(int h, double /*x*/, double y,
                         const EpisodeRandomness& rnd) {
  const int idx = spec_.grid.clamp_index(
      static_cast<int>(std::lround(y / spec_.grid.step)));
  const int c = cell_of(idx);
  const StepOutcome out = step_stage(spec_, h, spec_.grid.level(idx), rnd);
  double v = 0.0;
  if (h + 1 < spec_.H) {
    const IndexRange feas = feasible_actions(out.next_state, spec_);
    v = q_[h + 1][argmax_range(q_[h + 1], cell_of(feas.lo), cells_ - 1)];
  }
  const long t = ++t_[h][c];
  const double a = alpha(t, spec_.H);
  const double bonus =
      bonus_scale_ * std::sqrt(std::pow(double(spec_.H), 3) * iota_ / t);
  q_[h][c] = (1.0 - a) * q_[h][c] + a * (out.reward + v + bonus);
}

std::unique_ptr<Agent> make_agent(AgentKind kind, const EnvSpec& spec, long K,
                                  const AgentParams& params) {
  switch (kind) {
    case AgentKind::hql: return std::make_unique<HqlAgent>(spec, K, params);
    case AgentKind::fql: return std::make_unique<FqlAgent>(spec, K, params);
    case AgentKind::qlucb: return std::make_unique<QlUcbAgent>(spec, K, params);
    case AgentKind::aggql: return std::make_unique<AggQlAgent>(spec, K, params);
  }
  throw std::logic_error("make_agent: unknown kind");
}

std::string to_string(AgentKind k) {
  switch (k) {
    case AgentKind::hql: return "hql";
    case AgentKind::fql: return "fql";
    case AgentKind::qlucb: return "qlucb";
    case AgentKind::aggql: return "aggql";
  }
  return "?";
}

}  // namespace osfrl
