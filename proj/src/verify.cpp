#include "osfrl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "osfrl/agents.hpp"
#include "osfrl/config.hpp"
#include "osfrl/env.hpp"
#include "osfrl/harness.hpp"
#include "osfrl/oracle.hpp"
#include "osfrl/rng.hpp"
#include "osfrl/schedule.hpp"

namespace osfrl {
namespace {

struct Failure {
  std::ostringstream msg;
  bool failed = false;
};

#define CHECK_THAT(f, cond)                          \
  do {                                               \
    if (!(cond) && !(f).failed) {                    \
      (f).failed = true;                             \
      (f).msg << "failed: " #cond;                   \
    }                                                \
  } while (0)

EnvSpec small_backlogged(int H) {
  EnvSpec spec;
  spec.kind = EnvKind::backlogged;
  spec.feedback = Feedback::full;
  spec.H = H;
  spec.grid = build_action_grid(2.0, 0.5);
  spec.demand.kind = DemandKind::uniform_offset;
  spec.demand.offset.assign(H, 2.0);
  spec.demand.width = 1.0;
  spec.costs = CostParams::uniform(H, 2.0, 10.0, 0.0);
  spec.validate();
  return spec;
}

EnvSpec small_lost_sales(int H) {
  EnvSpec spec;
  spec.kind = EnvKind::lost_sales;
  spec.feedback = Feedback::lower_one_sided;
  spec.H = H;
  spec.grid = build_action_grid(6.0, 0.5);
  spec.demand.kind = DemandKind::uniform_offset;
  spec.demand.offset.resize(H);
  for (int h = 0; h < H; ++h) spec.demand.offset[h] = 1.5 + 0.5 * h;
  spec.demand.width = 1.0;
  spec.costs = CostParams::uniform(H, 2.0, 0.0, 10.0);
  spec.validate();
  return spec;
}

EnvSpec small_auction(int H) {
  EnvSpec spec;
  spec.kind = EnvKind::auction;
  spec.feedback = Feedback::higher_one_sided;
  spec.H = H;
  spec.grid = build_action_grid(2.0, 0.1);
  spec.bidders = 3;
  spec.validate();
  return spec;
}

void check_weight_sum(Failure& f) {
  for (int H = 1; H <= 10; ++H) {
    WeightSums ws;
    for (long t = 1; t <= 10000; ++t) {
      ws.advance(H);
      if (std::abs(ws.sum - 1.0) > 1e-12 || ws.w0 > 1e-12) {
        f.failed = true;
        f.msg << "sum(alpha_t^i) != 1 or alpha_t^0 != 0 at H=" << H << " t=" << t;
        return;
      }
    }
  }
}

void check_weight_bounds(Failure& f) {
  for (int H = 1; H <= 10; ++H) {
    WeightSums ws;
    for (long t = 1; t <= 10000; ++t) {
      ws.advance(H);
      const double cap = 2.0 * H / static_cast<double>(t);
      const double rt = std::sqrt(static_cast<double>(t));
      const bool ok = ws.max_w <= cap + 1e-12 && ws.sum_sq <= cap + 1e-12 &&
                      ws.sum_inv_sqrt >= 1.0 / rt - 1e-12 &&
                      ws.sum_inv_sqrt <= (1.0 + 1.0 / H) / rt + 1e-12;
      if (!ok) {
        f.failed = true;
        f.msg << "weight bound (max, squares, inverse-sqrt) violated at H=" << H << " t=" << t;
        return;
      }
    }
  }
}

void check_weight_partial_sum(Failure& f) {
  for (int H : {1, 3, 10}) {
    for (long i : {1L, 2L, 5L, 10L}) {
      // sum over t >= i of alpha_t^i; the tail is ~2i/T for H=1, so
      // the truncation must grow like 200i there
      const long T = std::max(10 * i * H * H, 200 * i);
      double w = alpha(i, H);  // alpha_i^i
      double s = w;
      for (long t = i + 1; t <= T; ++t) {
        w *= 1.0 - alpha(t, H);
        s += w;
      }
      const double limit = 1.0 + 1.0 / H;
      if (s > limit + 1e-9 || s < limit - 0.01) {
        f.failed = true;
        f.msg << "weight series partial sum " << s << " out of range at H="
              << H << " i=" << i;
        return;
      }
    }
  }
}

void check_profile_matches_sums(Failure& f) {
  for (int H : {1, 2, 5}) {
    WeightSums ws;
    const long t = 60;
    for (long j = 1; j <= t; ++j) ws.advance(H);
    const std::vector<double> w = weight_profile(t, H);
    double sum = 0.0, sum_sq = 0.0, max_w = 0.0, inv = 0.0;
    for (long i = 1; i <= t; ++i) {
      sum += w[i];
      sum_sq += w[i] * w[i];
      max_w = std::max(max_w, w[i]);
      inv += w[i] / std::sqrt(static_cast<double>(i));
    }
    CHECK_THAT(f, std::abs(sum - ws.sum) <= 1e-12);
    CHECK_THAT(f, std::abs(sum_sq - ws.sum_sq) <= 1e-12);
    CHECK_THAT(f, std::abs(max_w - ws.max_w) <= 1e-12);
    CHECK_THAT(f, std::abs(inv - ws.sum_inv_sqrt) <= 1e-12);
    CHECK_THAT(f, std::abs(w[0] - ws.w0) <= 1e-12);
  }
}

void check_radius_monotone(Failure& f) {
  for (RadiusMode mode : {RadiusMode::theory, RadiusMode::experiment}) {
    RateParams p;
    p.H = 3;
    p.A = 201;
    p.K = 2000;
    p.T = 6000;
    p.mode = mode;
    double prev = confidence_radius(1, p);
    for (long k = 2; k <= 2000; ++k) {
      const double r = confidence_radius(k, p);
      if (r > prev + 1e-12) {
        f.failed = true;
        f.msg << "radius increased at k=" << k << " mode="
              << (mode == RadiusMode::theory ? "theory" : "experiment");
        return;
      }
      prev = r;
    }
  }
}

void check_replay_determinism(Failure& f) {
  const CounterRng rng(7);
  for (const EnvSpec& spec : {small_backlogged(3), small_lost_sales(3),
                              small_auction(3)}) {
    const EpisodeRandomness rnd = draw_episode(spec, rng, 0, 0);
    for (int h = 0; h < spec.H; ++h) {
      for (int a = 0; a < spec.grid.count; ++a) {
        const StepOutcome s1 = step_stage(spec, h, spec.grid.level(a), rnd);
        const StepOutcome s2 = step_stage(spec, h, spec.grid.level(a), rnd);
        CHECK_THAT(f, s1.next_state == s2.next_state && s1.reward == s2.reward);
      }
    }
  }
}

void check_feedback_consistency(Failure& f) {
  const CounterRng rng(11);
  std::vector<EnvSpec> specs = {small_backlogged(2), small_lost_sales(2),
                                small_auction(2)};
  EnvSpec bandit = small_backlogged(2);
  bandit.feedback = Feedback::bandit;
  specs.push_back(bandit);
  for (const EnvSpec& spec : specs) {
    for (std::uint64_t e = 0; e < 5; ++e) {
      const EpisodeRandomness rnd = draw_episode(spec, rng, 0, e);
      for (int h = 0; h < spec.H; ++h) {
        for (int c = 0; c < spec.grid.count; ++c) {
          const double chosen = spec.grid.level(c);
          for (int q = 0; q < spec.grid.count; ++q) {
            const double query = spec.grid.level(q);
            const auto got = observe_counterfactual(spec, h, chosen, query, rnd);
            bool expect = false;
            switch (spec.feedback) {
              case Feedback::full: expect = true; break;
              case Feedback::lower_one_sided: expect = q <= c; break;
              case Feedback::higher_one_sided: expect = q >= c; break;
              case Feedback::bandit: expect = q == c; break;
            }
            CHECK_THAT(f, got.has_value() == expect);
            if (got) {
              const StepOutcome direct = step_stage(spec, h, query, rnd);
              CHECK_THAT(f, got->next_state == direct.next_state &&
                                got->reward == direct.reward);
            }
          }
        }
      }
    }
  }
}

void check_lost_sales_regret_equivalence(Failure& f) {
  const EnvSpec spec = small_lost_sales(4);
  const CounterRng rng(13);
  for (std::uint64_t e = 0; e < 50; ++e) {
    const EpisodeRandomness rnd = draw_episode(spec, rng, 0, e);
    double pseudo1 = 0.0, pseudo2 = 0.0, true1 = 0.0, true2 = 0.0;
    for (int h = 0; h < spec.H; ++h) {
      const int a1 = static_cast<int>(rng.uniform(1, e, h, 0) * spec.grid.count);
      const int a2 = static_cast<int>(rng.uniform(2, e, h, 0) * spec.grid.count);
      const double y1 = spec.grid.level(spec.grid.clamp_index(a1));
      const double y2 = spec.grid.level(spec.grid.clamp_index(a2));
      pseudo1 += step_stage(spec, h, y1, rnd).reward;
      pseudo2 += step_stage(spec, h, y2, rnd).reward;
      true1 -= true_stage_cost(spec, h, y1, rnd);
      true2 -= true_stage_cost(spec, h, y2, rnd);
    }
    CHECK_THAT(f, std::abs((pseudo1 - pseudo2) - (true1 - true2)) <= 1e-10);
  }
}

void check_monotone_dynamics(Failure& f) {
  const std::vector<EnvSpec> specs = {small_backlogged(1), small_lost_sales(1)};
  for (const EnvSpec& spec : specs) {
    for (double d : {0.3, 1.0, 2.4, 5.0}) {
      EpisodeRandomness rnd;
      rnd.demand = {d};
      double prev = -1e300;
      for (int a = 0; a < spec.grid.count; ++a) {
        const double x2 = step_stage(spec, 0, spec.grid.level(a), rnd).next_state;
        CHECK_THAT(f, x2 >= prev - 1e-12);
        prev = x2;
      }
    }
    // feasible-set lower endpoint nondecreasing in x
    int prev_lo = 0;
    for (double x = -1.0; x <= spec.grid.max_level; x += 0.07) {
      const int lo = feasible_actions(x, spec).lo;
      CHECK_THAT(f, lo >= prev_lo);
      prev_lo = lo;
    }
  }
}

void check_reward_concavity(Failure& f) {
  const std::vector<EnvSpec> specs = {small_backlogged(1), small_lost_sales(1)};
  for (const EnvSpec& spec : specs) {
    for (double d : {0.4, 1.7, 3.1}) {
      EpisodeRandomness rnd;
      rnd.demand = {d};
      std::vector<double> r(spec.grid.count);
      for (int a = 0; a < spec.grid.count; ++a) {
        r[a] = step_stage(spec, 0, spec.grid.level(a), rnd).reward;
      }
      for (int a = 1; a + 1 < spec.grid.count; ++a) {
        CHECK_THAT(f, r[a - 1] + r[a + 1] <= 2.0 * r[a] + 1e-9);
      }
    }
  }
}

double cost_scale(const OptimalSolution& sol) {
  double s = 1.0;
  for (const auto& row : sol.q_star) {
    for (double q : row) s = std::max(s, std::abs(q));
  }
  return s;
}

void check_oracle_concavity(Failure& f) {
  for (int table : {2, 4}) {
    for (int H : {1, 3, 5}) {
      const ExperimentConfig ec = to_experiment(table_preset(table, H, 100));
      const OptimalSolution sol = compute_optimal_q(ec.spec);
      const double tol = 1e-8 * cost_scale(sol);
      for (int h = 0; h < H; ++h) {
        for (int a = 1; a + 1 < ec.spec.grid.count; ++a) {
          const auto& q = sol.q_star[h];
          if (q[a - 1] + q[a + 1] > 2.0 * q[a] + tol) {
            f.failed = true;
            f.msg << "Q* not concave at table=" << table << " H=" << H
                  << " h=" << h << " a=" << a;
            return;
          }
        }
      }
    }
  }
}

void check_quadrature_convergence(Failure& f) {
  const ExperimentConfig ec = to_experiment(table_preset(2, 3, 100));
  const OptimalSolution s512 = compute_optimal_q(ec.spec, 512);
  const OptimalSolution s1024 = compute_optimal_q(ec.spec, 1024);
  const double tol = 1e-4 * cost_scale(s512);
  for (int h = 0; h < ec.spec.H; ++h) {
    for (int a = 0; a < ec.spec.grid.count; ++a) {
      CHECK_THAT(f, std::abs(s512.q_star[h][a] - s1024.q_star[h][a]) < tol);
    }
  }
}

void check_amortization_neutrality(Failure& f) {
  // Lost-sales telescoping is exact pathwise:
  // cost(original with c, salvage) - cost(amortized) = sum_h c_h D_h - c_1 x_1.
  const int H = 3;
  EnvSpec spec = small_lost_sales(H);
  const CostParams orig = CostParams::uniform(H, 2.0, 10.0, 10.0, 1.0, 0.5);
  EnvSpec amort = spec;
  amort.costs = amortize_costs(orig, H);
  const CounterRng rng(17);
  for (std::uint64_t e = 0; e < 30; ++e) {
    const EpisodeRandomness rnd = draw_episode(spec, rng, 0, e);
    const double x1 = 0.5 * static_cast<int>(rng.uniform(3, e, 0, 0) * 4);
    double x = x1;
    double cost_orig = 0.0, cost_amort = 0.0, constant = -orig.purchase[0] * x1;
    for (int h = 0; h < H; ++h) {
      const int lo = spec.grid.ceil_index(x);
      const int a = spec.grid.clamp_index(
          lo + static_cast<int>(rng.uniform(4, e, h, 0) * (spec.grid.count - lo)));
      const double y = spec.grid.level(std::max(a, lo));
      const double d = rnd.demand[h];
      cost_orig += orig.purchase[h] * (y - x) +
                   orig.holding[h] * std::max(y - d, 0.0) +
                   orig.penalty[h] * std::max(d - y, 0.0);
      if (h == H - 1) cost_orig -= orig.salvage * std::max(y - d, 0.0);
      cost_amort += true_stage_cost(amort, h, y, rnd);
      constant += orig.purchase[h] * d;
      x = std::max(y - d, 0.0);
    }
    CHECK_THAT(f, std::abs((cost_orig - cost_amort) - constant) <= 1e-10);
  }
}

void check_oracle_tiny_consistency(Failure& f) {
  // Integer lost-sales instance whose reachable states stay on the grid,
  // so an explicit TinyMdp reproduces the gridded oracle exactly.
  EnvSpec spec;
  spec.kind = EnvKind::lost_sales;
  spec.feedback = Feedback::lower_one_sided;
  spec.H = 2;
  spec.grid = build_action_grid(4.0, 1.0);
  spec.demand.kind = DemandKind::two_point;
  spec.demand.low = {1.0, 1.0};
  spec.demand.high = {2.0, 2.0};
  spec.demand.p_low = 0.6;
  spec.costs = CostParams::uniform(2, 1.0, 0.0, 3.0);
  spec.validate();

  TinyMdp mdp;
  mdp.S = 5;  // inventory level 0..4
  mdp.A = 5;  // order-up-to level 0..4; below-state actions clamp to y = s
  mdp.H = 2;
  mdp.reward.assign(static_cast<std::size_t>(mdp.H) * mdp.S * mdp.A, 0.0);
  mdp.trans.assign(static_cast<std::size_t>(mdp.H) * mdp.S * mdp.A * mdp.S, 0.0);
  for (int h = 0; h < mdp.H; ++h) {
    for (int s = 0; s < mdp.S; ++s) {
      for (int a = 0; a < mdp.A; ++a) {
        const int y = std::max(s, a);
        const double probs[2] = {spec.demand.p_low, 1.0 - spec.demand.p_low};
        const double ds[2] = {spec.demand.low[h], spec.demand.high[h]};
        for (int j = 0; j < 2; ++j) {
          const StepOutcome out = step_lost_sales(h, y, ds[j], spec.costs);
          mdp.r(h, s, a) += probs[j] * out.reward;
          mdp.p(h, s, a, static_cast<int>(out.next_state)) += probs[j];
        }
      }
    }
  }
  const TinySolution tiny = brute_force_q(mdp);
  const OptimalSolution sol = compute_optimal_q(spec);
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < mdp.S; ++s) {
      CHECK_THAT(f, std::abs(tiny.V(h, s, mdp) - sol.value_at(h, double(s))) <= 1e-9);
      for (int a = s; a < mdp.A; ++a) {
        CHECK_THAT(f, std::abs(tiny.Q(h, s, a, mdp) - sol.q_star[h][a]) <= 1e-9);
      }
    }
  }
}

void check_running_set_monotone(Failure& f) {
  const ExperimentConfig ec = to_experiment(table_preset(2, 3, 150));
  AgentParams params;
  params.radius_mode = RadiusMode::experiment;
  HqlAgent agent(ec.spec, 150, params);
  const CounterRng rng(ec.base_seed);
  std::vector<int> lo(ec.spec.H, 0), hi(ec.spec.H, ec.spec.grid.count - 1);
  for (long k = 0; k < 150; ++k) {
    const EpisodeRandomness rnd = draw_episode(ec.spec, rng, 0, k);
    run_episode(agent, ec.spec, rnd, 0.0);
    for (int h = 0; h < ec.spec.H; ++h) {
      const int l = agent.running_lo(h), u = agent.running_hi(h);
      CHECK_THAT(f, l <= u && l >= lo[h] && u <= hi[h]);
      lo[h] = l;
      hi[h] = u;
    }
  }
}

void check_no_skip_equivalence(Failure& f) {
  // Demand always exceeds the top of the grid, so every state keeps the
  // full grid feasible and tau is always h+1. A direct reference
  // recursion must then reproduce HQL's Q table exactly.
  const EnvSpec spec = small_backlogged(2);
  const long K = 25;
  AgentParams params;
  params.radius_mode = RadiusMode::theory;  // huge radius: no elimination
  HqlAgent agent(spec, K, params);
  const int A = spec.grid.count;
  std::vector<std::vector<double>> ref(spec.H, std::vector<double>(A, spec.H));
  const CounterRng rng(23);
  for (long k = 0; k < K; ++k) {
    const EpisodeRandomness rnd = draw_episode(spec, rng, 0, k);
    run_episode(agent, spec, rnd, 0.0);
    const double a_k = alpha(k + 1, spec.H);
    for (int h = spec.H - 1; h >= 0; --h) {
      for (int a = 0; a < A; ++a) {
        double target = step_stage(spec, h, spec.grid.level(a), rnd).reward;
        if (h + 1 < spec.H) {
          double v = ref[h + 1][0];
          for (int b = 1; b < A; ++b) v = std::max(v, ref[h + 1][b]);
          target += v;
        }
        ref[h][a] = (1.0 - a_k) * ref[h][a] + a_k * target;
      }
    }
    for (int h = 0; h < spec.H; ++h) {
      CHECK_THAT(f, agent.running_lo(h) == 0 && agent.running_hi(h) == A - 1);
      for (int a = 0; a < A; ++a) {
        CHECK_THAT(f, std::abs(agent.q(h, a) - ref[h][a]) <= 1e-12);
      }
    }
  }
}

void check_scale_free_selection(Failure& f) {
  const CounterRng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 21;
    std::vector<double> q(n), shifted(n);
    const double c = (rng.uniform(trial, 0, 0, 0) - 0.5) * 1000.0;
    for (int i = 0; i < n; ++i) {
      q[i] = rng.uniform(trial, 1, i, 0) * 50.0;
      shifted[i] = q[i] + c;
    }
    const int lo = static_cast<int>(rng.uniform(trial, 2, 0, 0) * n);
    const int hi = lo + static_cast<int>(rng.uniform(trial, 3, 0, 0) * (n - lo));
    const double radius = rng.uniform(trial, 4, 0, 0) * 20.0;
    const IndexRange r1 = shrink_running_set(q, lo, std::min(hi, n - 1), radius);
    const IndexRange r2 =
        shrink_running_set(shifted, lo, std::min(hi, n - 1), radius);
    CHECK_THAT(f, r1.lo == r2.lo && r1.hi == r2.hi);
  }
}

void check_harness_pairing(Failure& f) {
  ExperimentConfig ec;
  ec.spec = small_backlogged(2);
  ec.agents = {{AgentKind::fql, {}}, {AgentKind::hql, {}}};
  ec.K = 30;
  ec.reps = 1;
  ec.base_seed = 5;
  const ExperimentOutput out = run_experiment(ec);
  CHECK_THAT(f, out.results.size() == 3);  // opt + 2 agents
  for (const auto& r : out.results) {
    CHECK_THAT(f, r.seed == out.results[0].seed);
    CHECK_THAT(f, r.opt_cost == out.results[0].opt_cost);
  }
}

std::string serialize_results(const std::vector<RunResult>& rs) {
  std::ostringstream ss;
  for (const auto& r : rs) {
    ss << r.agent << ',' << r.rep << ',' << r.seed << ','
       << format_double(r.total_cost) << ',' << format_double(r.opt_cost) << ','
       << format_double(r.regret) << '\n';
  }
  return ss.str();
}

void check_harness_determinism(Failure& f) {
  ExperimentConfig ec;
  ec.spec = small_backlogged(2);
  ec.agents = {{AgentKind::fql, {}}, {AgentKind::hql, {}}};
  ec.K = 40;
  ec.reps = 5;
  ec.base_seed = 9;
  ec.workers = 1;
  const std::string a = serialize_results(run_experiment(ec).results);
  ec.workers = 3;
  const std::string b = serialize_results(run_experiment(ec).results);
  CHECK_THAT(f, a == b);
}

void check_regret_nonnegative(Failure& f) {
  ExperimentConfig ec = to_experiment(table_preset(2, 1, 100));
  ec.reps = 100;
  const ExperimentOutput out = run_experiment(ec);
  for (const auto& s : out.summary) {
    if (s.agent == "opt") continue;
    const double se = s.sd_regret / std::sqrt(static_cast<double>(s.reps));
    if (s.mean_regret < -2.0 * se) {
      f.failed = true;
      f.msg << s.agent << " mean regret " << s.mean_regret << " < -2 SE " << -2.0 * se;
      return;
    }
  }
}

void check_config_round_trip(Failure& f) {
  for (int table : {2, 3, 4, 5}) {
    for (int H : {1, 3}) {
      const CliConfig c = table_preset(table, H, 100);
      const CliConfig back = parse_cli_text(emit_config(c));
      const CliConfig back2 = parse_cli_text(emit_config(back));
      if (!(back == back2) || emit_config(c) != emit_config(back)) {
        f.failed = true;
        f.msg << "round trip failed for table " << table << " H=" << H;
        return;
      }
      to_experiment(back);  // must not throw
    }
  }
}

void check_table2_cell(Failure& f) {
  ExperimentConfig ec = to_experiment(table_preset(2, 1, 100));
  ec.reps = 300;
  const ExperimentOutput out = run_experiment(ec);
  double opt = 0.0, fql = 0.0, hql = 0.0;
  for (const auto& s : out.summary) {
    if (s.agent == "opt") opt = s.mean_cost;
    if (s.agent == "fql") fql = s.mean_cost;
    if (s.agent == "hql") hql = s.mean_cost;
  }
  if (!(opt >= 79.0 && opt <= 95.0)) {
    f.failed = true;
    f.msg << "OPT mean " << opt << " outside [79, 95]";
    return;
  }
  if (std::abs(fql - 103.4) > 0.12 * 103.4) {
    f.failed = true;
    f.msg << "FQL mean " << fql << " more than 12% from 103.4";
    return;
  }
  if (std::abs(hql - 125.9) > 0.25 * 125.9) {
    f.failed = true;
    f.msg << "HQL mean " << hql << " more than 25% from 125.9";
  }
}

struct NamedCheck {
  const char* name;
  bool quick_ok;  // included under --quick
  std::function<void(Failure&)> fn;
};

}  // namespace

std::vector<CheckResult> run_verification(bool quick) {
  const std::vector<NamedCheck> checks = {
      {"schedule.weights_sum_to_one", true, check_weight_sum},
      {"schedule.weight_bounds", true, check_weight_bounds},
      {"schedule.weight_partial_sum", true, check_weight_partial_sum},
      {"schedule.profile_matches_incremental_sums", true, check_profile_matches_sums},
      {"schedule.radius_nonincreasing", true, check_radius_monotone},
      {"env.replay_determinism", true, check_replay_determinism},
      {"env.feedback_consistency", true, check_feedback_consistency},
      {"env.lost_sales_regret_equivalence", true, check_lost_sales_regret_equivalence},
      {"env.monotone_dynamics", true, check_monotone_dynamics},
      {"env.reward_concavity", true, check_reward_concavity},
      {"oracle.q_star_concavity", true, check_oracle_concavity},
      {"oracle.quadrature_convergence", true, check_quadrature_convergence},
      {"oracle.amortization_neutrality", true, check_amortization_neutrality},
      {"oracle.tiny_mdp_consistency", true, check_oracle_tiny_consistency},
      {"agents.running_set_monotone", true, check_running_set_monotone},
      {"agents.no_skip_equivalence", true, check_no_skip_equivalence},
      {"agents.scale_free_selection", true, check_scale_free_selection},
      {"harness.crn_pairing", true, check_harness_pairing},
      {"harness.worker_count_determinism", true, check_harness_determinism},
      {"harness.regret_nonnegative", false, check_regret_nonnegative},
      {"cli.config_round_trip", true, check_config_round_trip},
      {"cli.table2_h1_k100_reproduction", false, check_table2_cell},
  };
  std::vector<CheckResult> results;
  for (const auto& c : checks) {
    if (quick && !c.quick_ok) continue;
    CheckResult r;
    r.name = c.name;
    Failure f;
    try {
      c.fn(f);
      r.passed = !f.failed;
      r.detail = f.msg.str();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace osfrl
