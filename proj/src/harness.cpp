#include "osfrl/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#include "osfrl/rng.hpp"

namespace osfrl {

void ExperimentConfig::validate() const {
  spec.validate();
  if (K < 1) throw std::invalid_argument("ExperimentConfig: K must be >= 1");
  if (reps < 1) throw std::invalid_argument("ExperimentConfig: reps must be >= 1");
  if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
  if (agents.empty()) throw std::invalid_argument("ExperimentConfig: no agents");
}

double run_episode(Agent& agent, const EnvSpec& spec,
                   const EpisodeRandomness& rnd, double x1) {
  agent.begin_episode(x1);
  double x = x1;
  double cost = 0.0;
  for (int h = 0; h < spec.H; ++h) {
    const double y = agent.select(h, x);
    cost += true_stage_cost(spec, h, y, rnd);
    agent.observe(h, x, y, rnd);
    x = step_stage(spec, h, y, rnd).next_state;
  }
  agent.end_episode();
  return cost;
}

namespace {

void run_replication(const ExperimentConfig& config, const OptimalSolution& sol,
                     int rep, bool traces, std::vector<RunResult>& slot) {
  const CounterRng rng(config.base_seed);
  const std::uint64_t seed = derive_seed(config.base_seed, rep);

  std::vector<EpisodeRandomness> episodes;
  episodes.reserve(config.K);
  for (long k = 0; k < config.K; ++k) {
    episodes.push_back(draw_episode(config.spec, rng, rep, k));
  }

  RunResult opt;
  opt.agent = "opt";
  opt.rep = rep;
  opt.seed = seed;
  for (long k = 0; k < config.K; ++k) {
    const double c = run_clairvoyant(sol, config.spec, episodes[k], config.x1);
    opt.total_cost += c;
    if (traces) opt.episode_costs.push_back(c);
  }
  opt.opt_cost = opt.total_cost;
  opt.regret = 0.0;
  if (traces) opt.opt_episode_costs = opt.episode_costs;
  slot.push_back(opt);

  for (const AgentConfig& ac : config.agents) {
    auto agent = make_agent(ac.kind, config.spec, config.K, ac.params);
    RunResult rr;
    rr.agent = agent->name();
    rr.rep = rep;
    rr.seed = seed;
    for (long k = 0; k < config.K; ++k) {
      const double c = run_episode(*agent, config.spec, episodes[k], config.x1);
      rr.total_cost += c;
      if (traces) rr.episode_costs.push_back(c);
    }
    rr.opt_cost = opt.total_cost;
    rr.regret = rr.total_cost - rr.opt_cost;
    if (traces) rr.opt_episode_costs = opt.episode_costs;
    slot.push_back(std::move(rr));
  }
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config, bool traces) {
  config.validate();
  const OptimalSolution sol = compute_optimal_q(config.spec);

  std::vector<std::vector<RunResult>> slots(config.reps);
  const int workers = std::min(config.workers, config.reps);
  if (workers <= 1) {
    for (int r = 0; r < config.reps; ++r) {
      run_replication(config, sol, r, traces, slots[r]);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= config.reps) break;
          run_replication(config, sol, r, traces, slots[r]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  ExperimentOutput out;
  for (auto& s : slots) {
    for (auto& rr : s) out.results.push_back(std::move(rr));
  }
  out.summary = summarize(out.results);
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("summarize: empty results");
  // preserve first-appearance order of agents
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> groups;
  for (const auto& r : results) {
    auto [it, inserted] = groups.try_emplace(r.agent);
    if (inserted) order.push_back(r.agent);
    it->second.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& name : order) {
    const auto& g = groups[name];
    SummaryRow row;
    row.agent = name;
    row.reps = static_cast<int>(g.size());
    double mc = 0.0, mr = 0.0;
    for (const auto* r : g) {
      mc += r->total_cost;
      mr += r->regret;
    }
    mc /= row.reps;
    mr /= row.reps;
    double vc = 0.0, vr = 0.0;
    if (row.reps > 1) {
      for (const auto* r : g) {
        vc += (r->total_cost - mc) * (r->total_cost - mc);
        vr += (r->regret - mr) * (r->regret - mr);
      }
      vc /= row.reps - 1;
      vr /= row.reps - 1;
    } else {
      row.degenerate = true;
    }
    row.mean_cost = mc;
    row.sd_cost = std::sqrt(vc);
    row.mean_regret = mr;
    row.sd_regret = std::sqrt(vr);
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> regret_curve(const std::vector<RunResult>& results,
                                 const std::string& agent) {
  std::vector<double> curve;
  int reps = 0;
  for (const auto& r : results) {
    if (r.agent != agent) continue;
    if (r.episode_costs.empty()) {
      throw std::invalid_argument("regret_curve: traces were not recorded");
    }
    if (curve.empty()) curve.assign(r.episode_costs.size(), 0.0);
    double cum = 0.0;
    for (std::size_t k = 0; k < r.episode_costs.size(); ++k) {
      cum += r.episode_costs[k] - r.opt_episode_costs[k];
      curve[k] += cum;
    }
    ++reps;
  }
  if (reps == 0) throw std::invalid_argument("regret_curve: no such agent");
  for (double& v : curve) v /= reps;
  return curve;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_outputs(const ExperimentConfig& config, const ExperimentOutput& out,
                   const std::string& config_echo) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const std::string hs = std::to_string(config.spec.H);
  const std::string ks = std::to_string(config.K);
  {
    std::ofstream f(fs::path(config.out_dir) / "results.csv", std::ios::binary);
    if (!f) throw std::runtime_error("write_outputs: cannot open results.csv");
    f << "algorithm,H,K,rep,seed,total_cost,opt_cost,regret\n";
    for (const auto& r : out.results) {
      f << r.agent << ',' << hs << ',' << ks << ',' << r.rep << ',' << r.seed
        << ',' << format_double(r.total_cost) << ',' << format_double(r.opt_cost)
        << ',' << format_double(r.regret) << '\n';
    }
  }
  {
    std::ofstream f(fs::path(config.out_dir) / "summary.csv", std::ios::binary);
    if (!f) throw std::runtime_error("write_outputs: cannot open summary.csv");
    f << "algorithm,H,K,mean_cost,sd_cost,mean_regret,sd_regret\n";
    for (const auto& s : out.summary) {
      f << s.agent << ',' << hs << ',' << ks << ',' << format_double(s.mean_cost)
        << ',' << format_double(s.sd_cost) << ',' << format_double(s.mean_regret)
        << ',' << format_double(s.sd_regret) << '\n';
    }
  }
  {
    std::ofstream f(fs::path(config.out_dir) / "manifest.txt", std::ios::binary);
    if (!f) throw std::runtime_error("write_outputs: cannot open manifest.txt");
    f << "artifact=osfrl 0.1.0\n";
    f << "base_seed=" << config.base_seed << "\n";
    f << "reps=" << config.reps << "\n";
    f << "# config echo\n";
    f << config_echo;
  }
}

}  // namespace osfrl
