#include "osfrl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osfrl {
namespace {

// Rounds the requested node count up so that quadrature cells align
// with the action lattice shifted into the demand support. With the
// supports used here (width and offset both multiples of the grid
// step) every kink of the integrand lands on a cell boundary and the
// midpoint rule is exact.
int aligned_nodes(const EnvSpec& spec, int h, int requested) {
  const double step = spec.grid.step;
  const double w = spec.demand.width;
  const double off = spec.demand.offset[h];
  const double wr = w / step;
  const double orr = off / step;
  if (std::abs(wr - std::round(wr)) > 1e-9 ||
      std::abs(orr - std::round(orr)) > 1e-9) {
    return requested;
  }
  const int m = std::max(1, static_cast<int>(std::round(wr)));
  return ((requested + m - 1) / m) * m;
}

double expected_auction_revenue(const EnvSpec& spec, int h, double reserve,
                                int nodes) {
  // Bidder values iid uniform on [lo, lo+1]; see draw_episode.
  const double lo = 0.2 * (h + 1);
  const double hi = lo + 1.0;
  const int n = spec.bidders;
  const auto F = [&](double v) {
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  };
  const double p = 1.0 - F(reserve);  // P(value >= reserve)
  double rev = reserve * n * p * std::pow(1.0 - p, n - 1);
  if (n >= 2) {
    // E[M2 ; M2 >= reserve] where M2 is the second-largest of n values:
    // density n(n-1) F^{n-2} (1-F) f.
    const double a = std::max(reserve, lo);
    if (a < hi) {
      const double width = hi - a;
      const double cell = width / nodes;
      double acc = 0.0;
      for (int j = 0; j < nodes; ++j) {
        const double m = a + (j + 0.5) * cell;
        const double Fm = F(m);
        acc += m * n * (n - 1) * std::pow(Fm, n - 2) * (1.0 - Fm);
      }
      rev += acc * cell / (hi - lo);
    }
  }
  return rev;
}

}  // namespace

double OptimalSolution::value_at(int h, double x) const {
  if (h >= H) return 0.0;
  const int i = grid.clamp_index(grid.ceil_index(x));
  return suffix_max[h][i];
}

OptimalSolution compute_optimal_q(const EnvSpec& spec, int quadrature_nodes) {
  spec.validate();
  if (quadrature_nodes < 1) {
    throw std::invalid_argument("compute_optimal_q: need at least one node");
  }
  const int H = spec.H;
  const int A = spec.grid.count;
  OptimalSolution sol;
  sol.grid = spec.grid;
  sol.H = H;
  sol.q_star.assign(H, std::vector<double>(A, 0.0));
  sol.suffix_max.assign(H, std::vector<double>(A, 0.0));
  sol.base_stock.assign(H, 0);

  for (int h = H - 1; h >= 0; --h) {
    auto& q = sol.q_star[h];
    const auto vnext = [&](double x) {
      return h + 1 < H ? sol.suffix_max[h + 1][spec.grid.clamp_index(
                             spec.grid.ceil_index(x))]
                       : 0.0;
    };
    for (int a = 0; a < A; ++a) {
      const double y = spec.grid.level(a);
      if (spec.kind == EnvKind::auction) {
        q[a] = expected_auction_revenue(spec, h, y, quadrature_nodes) +
               (h + 1 < H ? sol.suffix_max[h + 1][0] : 0.0);
        continue;
      }
      EpisodeRandomness rnd;
      rnd.demand.assign(H, 0.0);
      if (spec.demand.kind == DemandKind::two_point) {
        double acc = 0.0;
        const double probs[2] = {spec.demand.p_low, 1.0 - spec.demand.p_low};
        const double vals[2] = {spec.demand.low[h], spec.demand.high[h]};
        for (int j = 0; j < 2; ++j) {
          rnd.demand[h] = vals[j];
          const StepOutcome out = step_stage(spec, h, y, rnd);
          acc += probs[j] * (out.reward + vnext(out.next_state));
        }
        q[a] = acc;
      } else {
        const int n = aligned_nodes(spec, h, quadrature_nodes);
        const double off = spec.demand.offset[h];
        const double cell = spec.demand.width / n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          rnd.demand[h] = off + (j + 0.5) * cell;
          const StepOutcome out = step_stage(spec, h, y, rnd);
          acc += out.reward + vnext(out.next_state);
        }
        q[a] = acc / n;
      }
    }
    // suffix max and argmax with ties toward the smaller action
    double best = q[A - 1];
    int best_idx = A - 1;
    sol.suffix_max[h][A - 1] = best;
    for (int a = A - 2; a >= 0; --a) {
      if (q[a] >= best) {  // >= so the smaller index wins ties
        best = q[a];
        best_idx = a;
      }
      sol.suffix_max[h][a] = best;
    }
    sol.base_stock[h] = best_idx;
  }
  return sol;
}

double run_clairvoyant(const OptimalSolution& solution, const EnvSpec& spec,
                       const EpisodeRandomness& rnd, double x1) {
  double x = x1;
  double cost = 0.0;
  for (int h = 0; h < spec.H; ++h) {
    int idx = solution.base_stock[h];
    if (!spec.stateless()) {
      idx = std::max(idx, spec.grid.clamp_index(spec.grid.ceil_index(x)));
    }
    const double y = solution.grid.level(idx);
    cost += true_stage_cost(spec, h, y, rnd);
    x = step_stage(spec, h, y, rnd).next_state;
  }
  return cost;
}

void TinyMdp::validate() const {
  if (S < 1 || A < 1 || H < 1) {
    throw std::invalid_argument("TinyMdp: S, A, H must be >= 1");
  }
  if (reward.size() != static_cast<std::size_t>(H) * S * A ||
      trans.size() != static_cast<std::size_t>(H) * S * A * S) {
    throw std::invalid_argument("TinyMdp: tensor sizes do not match S, A, H");
  }
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        double total = 0.0;
        for (int s2 = 0; s2 < S; ++s2) total += p(h, s, a, s2);
        if (std::abs(total - 1.0) > 1e-12) {
          throw std::invalid_argument("TinyMdp: transition row does not sum to 1");
        }
      }
    }
  }
}

TinySolution brute_force_q(const TinyMdp& mdp) {
  mdp.validate();
  TinySolution sol;
  sol.q.assign(static_cast<std::size_t>(mdp.H) * mdp.S * mdp.A, 0.0);
  sol.v.assign(static_cast<std::size_t>(mdp.H + 1) * mdp.S, 0.0);
  for (int h = mdp.H - 1; h >= 0; --h) {
    for (int s = 0; s < mdp.S; ++s) {
      double best = -1e300;
      for (int a = 0; a < mdp.A; ++a) {
        double q = mdp.r(h, s, a);
        for (int s2 = 0; s2 < mdp.S; ++s2) {
          q += mdp.p(h, s, a, s2) * sol.V(h + 1, s2, mdp);
        }
        sol.Q(h, s, a, mdp) = q;
        best = std::max(best, q);
      }
      sol.V(h, s, mdp) = best;
    }
  }
  return sol;
}

double shortfall_residual(const TinyMdp& mdp, const std::vector<double>& policy,
                          int start_state) {
  mdp.validate();
  if (policy.size() != static_cast<std::size_t>(mdp.H) * mdp.S * mdp.A) {
    throw std::invalid_argument("shortfall_residual: bad policy size");
  }
  const TinySolution star = brute_force_q(mdp);
  const auto pi = [&](int h, int s, int a) {
    return policy[(h * mdp.S + s) * mdp.A + a];
  };

  // Policy value by backward induction.
  std::vector<double> vpi(static_cast<std::size_t>(mdp.H + 1) * mdp.S, 0.0);
  for (int h = mdp.H - 1; h >= 0; --h) {
    for (int s = 0; s < mdp.S; ++s) {
      double v = 0.0;
      for (int a = 0; a < mdp.A; ++a) {
        double q = mdp.r(h, s, a);
        for (int s2 = 0; s2 < mdp.S; ++s2) {
          q += mdp.p(h, s, a, s2) * vpi[(h + 1) * mdp.S + s2];
        }
        v += pi(h, s, a) * q;
      }
      vpi[h * mdp.S + s] = v;
    }
  }

  // Expected shortfall sum over the policy's state distribution.
  std::vector<double> dist(mdp.S, 0.0);
  dist[start_state] = 1.0;
  double shortfall = 0.0;
  for (int h = 0; h < mdp.H; ++h) {
    std::vector<double> next(mdp.S, 0.0);
    for (int s = 0; s < mdp.S; ++s) {
      if (dist[s] == 0.0) continue;
      double vmax = -1e300;
      for (int a = 0; a < mdp.A; ++a) vmax = std::max(vmax, star.Q(h, s, a, mdp));
      for (int a = 0; a < mdp.A; ++a) {
        const double w = dist[s] * pi(h, s, a);
        if (w == 0.0) continue;
        shortfall += w * (vmax - star.Q(h, s, a, mdp));
        for (int s2 = 0; s2 < mdp.S; ++s2) {
          next[s2] += w * mdp.p(h, s, a, s2);
        }
      }
    }
    dist.swap(next);
  }

  const double gap = star.V(0, start_state, mdp) - vpi[start_state];
  return gap - shortfall;
}

}  // namespace osfrl
