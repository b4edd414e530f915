#pragma once

#include <memory>
#include <string>
#include <vector>

#include "osfrl/env.hpp"
#include "osfrl/schedule.hpp"

namespace osfrl {

enum class AgentKind { hql, fql, qlucb, aggql };

struct AgentParams {
  RadiusMode radius_mode = RadiusMode::experiment;
  double bonus_scale = 1.0;
  double agg_step = 1.0;
};

// Episode protocol: begin_episode, then for each stage select/observe,
// then end_episode. One instance per replication, single-threaded.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual const std::string& name() const = 0;
  virtual void begin_episode(double x1) = 0;
  virtual double select(int h, double x) = 0;
  virtual void observe(int h, double x, double y, const EpisodeRandomness& rnd) = 0;
  virtual void end_episode() = 0;
};

// Elimination-based half-Q-learning. Keeps a per-stage contiguous
// running set of candidate actions, plays its extreme element to
// maximize one-sided feedback, and replays the episode's randomness
// backward at episode end to update every surviving action.
class HqlAgent : public Agent {
 public:
  HqlAgent(const EnvSpec& spec, long K, AgentParams params);

  const std::string& name() const override { return name_; }
  void begin_episode(double x1) override;
  double select(int h, double x) override;
  void observe(int h, double x, double y, const EpisodeRandomness& rnd) override;
  void end_episode() override;

  int running_lo(int h) const { return lo_[h]; }
  int running_hi(int h) const { return hi_[h]; }
  // test hook: overrides the running set for stage h
  void force_running_set(int h, int lo, int hi);
  double q(int h, int idx) const { return q_[h][idx]; }
  long episode() const { return k_; }
  // V_h(x): max Q over running-set actions feasible at x; 0 at h == H.
  double value_at(int h, double x) const;

 private:
  EnvSpec spec_;
  RateParams rate_;
  std::string name_ = "hql";
  long k_ = 1;
  std::vector<int> lo_, hi_;
  std::vector<std::vector<double>> q_;
  EpisodeRandomness record_;
};

// Keeps the actions within `radius` of the maximum, restricted to the
// maximal contiguous run containing the argmax (ties -> smaller).
// Returns the new [lo, hi] on the same index base as `q`.
IndexRange shrink_running_set(const std::vector<double>& q, int lo, int hi,
                              double radius);

// Full-Q-learning: greedy feasible argmax selection, every action
// updated in-stage from the realized randomness.
class FqlAgent : public Agent {
 public:
  FqlAgent(const EnvSpec& spec, long K, AgentParams params = {});

  const std::string& name() const override { return name_; }
  void begin_episode(double x1) override;
  double select(int h, double x) override;
  void observe(int h, double x, double y, const EpisodeRandomness& rnd) override;
  void end_episode() override;

  double q(int h, int idx) const { return q_[h][idx]; }
  double value_at(int h, double x) const;

 private:
  EnvSpec spec_;
  std::string name_ = "fql";
  long k_ = 1;
  std::vector<std::vector<double>> q_;
  std::vector<double> suffix_;
};

// Q-learning with an optimistic Hoeffding-style bonus, bandit
// feedback: only the taken action's entry is updated.
class QlUcbAgent : public Agent {
 public:
  QlUcbAgent(const EnvSpec& spec, long K, AgentParams params);

  const std::string& name() const override { return name_; }
  void begin_episode(double x1) override;
  double select(int h, double x) override;
  void observe(int h, double x, double y, const EpisodeRandomness& rnd) override;
  void end_episode() override {}

  double q(int h, int idx) const { return q_[h][idx]; }
  long visits(int h, int idx) const { return t_[h][idx]; }

 private:
  EnvSpec spec_;
  std::string name_ = "qlucb";
  double bonus_scale_;
  double iota_;
  std::vector<std::vector<double>> q_;
  std::vector<std::vector<long>> t_;
};

// Same update as QlUcbAgent but keyed by aggregate action cells
// (multiples of agg_step); plays the smallest feasible grid action in
// the chosen cell.
class AggQlAgent : public Agent {
 public:
  AggQlAgent(const EnvSpec& spec, long K, AgentParams params);

  const std::string& name() const override { return name_; }
  void begin_episode(double x1) override;
  double select(int h, double x) override;
  void observe(int h, double x, double y, const EpisodeRandomness& rnd) override;
  void end_episode() override {}

  int cell_count() const { return cells_; }

 private:
  int cell_of(int grid_idx) const { return grid_idx / ratio_; }

  EnvSpec spec_;
  std::string name_ = "aggql";
  double bonus_scale_;
  double iota_;
  int ratio_ = 1;
  int cells_ = 1;
  std::vector<std::vector<double>> q_;
  std::vector<std::vector<long>> t_;
};

std::unique_ptr<Agent> make_agent(AgentKind kind, const EnvSpec& spec, long K,
                                  const AgentParams& params);

std::string to_string(AgentKind k);

}  // namespace osfrl
