#pragma once

#include <vector>

#include "osfrl/env.hpp"

namespace osfrl {

// Clairvoyant solution of the gridded decision problem. Q-values are
// keyed by action only (rewards and transitions do not depend on the
// state); states enter through feasibility, so V*_h(x) is the max of
// Q*_h over grid actions >= x.
struct OptimalSolution {
  ActionGrid grid;
  int H = 0;
  std::vector<std::vector<double>> q_star;      // [H][A]
  std::vector<std::vector<double>> suffix_max;  // [H][A], max of q_star[h][i..]
  std::vector<int> base_stock;                  // argmax index, ties -> smaller

  // V*_h(x); h == H returns 0 (terminal convention).
  double value_at(int h, double x) const;
  double base_stock_level(int h) const { return grid.level(base_stock[h]); }
};

// Backward induction with the demand distributions known. Expectations
// use midpoint quadrature over uniform supports (the node count is
// rounded up so cells align with the action lattice, which makes the
// piecewise-linear integrand exact) and exact averages for two-point
// demand.
OptimalSolution compute_optimal_q(const EnvSpec& spec, int quadrature_nodes = 512);

// Runs the order-up-to-max(x, S*_h) policy on one episode of realized
// randomness and returns the realized (true) total cost.
double run_clairvoyant(const OptimalSolution& solution, const EnvSpec& spec,
                       const EpisodeRandomness& rnd, double x1);

// Explicit finite MDP for brute-force test oracles.
struct TinyMdp {
  int S = 1;
  int A = 1;
  int H = 1;
  std::vector<double> reward;  // [h][s][a], expected reward
  std::vector<double> trans;   // [h][s][a][s'], rows sum to 1

  double& r(int h, int s, int a) { return reward[(h * S + s) * A + a]; }
  double r(int h, int s, int a) const { return reward[(h * S + s) * A + a]; }
  double& p(int h, int s, int a, int s2) {
    return trans[((h * S + s) * A + a) * S + s2];
  }
  double p(int h, int s, int a, int s2) const {
    return trans[((h * S + s) * A + a) * S + s2];
  }
  void validate() const;
};

struct TinySolution {
  std::vector<double> q;  // [h][s][a]
  std::vector<double> v;  // [h][s], plus terminal row of zeros

  double& Q(int h, int s, int a, const TinyMdp& m) {
    return q[(h * m.S + s) * m.A + a];
  }
  double Q(int h, int s, int a, const TinyMdp& m) const {
    return q[(h * m.S + s) * m.A + a];
  }
  double& V(int h, int s, const TinyMdp& m) { return v[h * m.S + s]; }
  double V(int h, int s, const TinyMdp& m) const { return v[h * m.S + s]; }
};

TinySolution brute_force_q(const TinyMdp& mdp);

// Exact residual of the shortfall decomposition for a (possibly
// stochastic) policy given as per-stage state -> action distributions
// policy[(h*S + s)*A + a]. Both sides are evaluated by forward
// enumeration of the policy's state distribution.
double shortfall_residual(const TinyMdp& mdp, const std::vector<double>& policy,
                          int start_state);

}  // namespace osfrl
