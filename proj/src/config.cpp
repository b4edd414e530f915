#include "osfrl/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace osfrl {
namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

// Parsed key-value store that tracks which keys were consumed so the
// leftovers can be reported as unknown.
struct KeyStore {
  std::map<std::string, RawEntry> entries;
  std::set<std::string> consumed;

  const RawEntry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    consumed.insert(key);
    return &it->second;
  }

  std::string require(const std::string& key, std::vector<std::string>& missing) {
    const RawEntry* e = find(key);
    if (!e) {
      missing.push_back(key);
      return "";
    }
    return e->value;
  }
};

double parse_double(const RawEntry& e, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    fail(e.line, key + ": expected a number, got '" + e.value + "'");
  }
  if (pos != e.value.size()) {
    fail(e.line, key + ": trailing characters in '" + e.value + "'");
  }
  return v;
}

long long parse_int(const RawEntry& e, const std::string& key) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(e.value, &pos);
  } catch (const std::exception&) {
    fail(e.line, key + ": expected an integer, got '" + e.value + "'");
  }
  if (pos != e.value.size()) {
    fail(e.line, key + ": trailing characters in '" + e.value + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool has_agent(const CliConfig& c, const std::string& name) {
  for (const auto& a : c.agents) {
    if (a == name) return true;
  }
  return false;
}

EnvKind kind_from_string(const std::string& s) {
  if (s == "backlogged") return EnvKind::backlogged;
  if (s == "lost-sales") return EnvKind::lost_sales;
  if (s == "auction") return EnvKind::auction;
  if (s == "lower-bound") return EnvKind::lower_bound;
  throw ConfigError("env.kind: unknown value '" + s + "'");
}

Feedback default_feedback(EnvKind kind) {
  switch (kind) {
    case EnvKind::backlogged: return Feedback::full;
    case EnvKind::lost_sales: return Feedback::lower_one_sided;
    case EnvKind::auction: return Feedback::higher_one_sided;
    case EnvKind::lower_bound: return Feedback::full;
  }
  throw ConfigError("env.kind: unknown kind");
}

Feedback feedback_from_string(const std::string& s) {
  if (s == "bandit") return Feedback::bandit;
  if (s == "lower-one-sided") return Feedback::lower_one_sided;
  if (s == "higher-one-sided") return Feedback::higher_one_sided;
  if (s == "full") return Feedback::full;
  throw ConfigError("env.feedback: unknown value '" + s + "'");
}

AgentKind agent_from_string(const std::string& s) {
  if (s == "hql") return AgentKind::hql;
  if (s == "fql") return AgentKind::fql;
  if (s == "qlucb") return AgentKind::qlucb;
  if (s == "aggql") return AgentKind::aggql;
  throw ConfigError("agents: unknown agent '" + s + "'");
}

}  // namespace

CliConfig parse_cli_text(const std::string& text) {
  KeyStore store;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    auto [it, inserted] = store.entries.try_emplace(key, RawEntry{value, lineno});
    if (!inserted) {
      fail(lineno, "duplicate key '" + key + "' (first at line " +
                       std::to_string(it->second.line) + ")");
    }
  }

  CliConfig c;
  std::vector<std::string> missing;

  c.env_kind = store.require("env.kind", missing);
  if (const RawEntry* e = store.find("env.H")) c.H = static_cast<int>(parse_int(*e, "env.H"));
  else missing.push_back("env.H");
  if (const RawEntry* e = store.find("env.K")) c.K = static_cast<long>(parse_int(*e, "env.K"));
  else missing.push_back("env.K");
  if (const RawEntry* e = store.find("grid.max")) c.grid_max = parse_double(*e, "grid.max");
  else missing.push_back("grid.max");
  if (const RawEntry* e = store.find("grid.step")) c.grid_step = parse_double(*e, "grid.step");
  else missing.push_back("grid.step");
  if (const RawEntry* e = store.find("agents")) c.agents = split_list(e->value);
  else missing.push_back("agents");

  const bool inventory =
      c.env_kind == "backlogged" || c.env_kind == "lost-sales";
  if (inventory) {
    if (const RawEntry* e = store.find("env.costs.o")) c.cost_o = parse_double(*e, "env.costs.o");
    else missing.push_back("env.costs.o");
    if (c.env_kind == "backlogged") {
      if (const RawEntry* e = store.find("env.costs.b")) c.cost_b = parse_double(*e, "env.costs.b");
      else missing.push_back("env.costs.b");
    } else {
      if (const RawEntry* e = store.find("env.costs.p")) c.cost_p = parse_double(*e, "env.costs.p");
      else missing.push_back("env.costs.p");
    }
    if (const RawEntry* e = store.find("env.demand.offset_rule")) c.offset_rule = e->value;
    else missing.push_back("env.demand.offset_rule");
  }

  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }

  // optional keys
  if (const RawEntry* e = store.find("env.feedback")) c.feedback = e->value;
  if (const RawEntry* e = store.find("env.bidders")) c.bidders = static_cast<int>(parse_int(*e, "env.bidders"));
  if (const RawEntry* e = store.find("env.lb.scale")) c.lb_scale = parse_double(*e, "env.lb.scale");
  if (const RawEntry* e = store.find("env.costs.b")) c.cost_b = parse_double(*e, "env.costs.b");
  if (const RawEntry* e = store.find("env.costs.p")) c.cost_p = parse_double(*e, "env.costs.p");
  if (const RawEntry* e = store.find("env.costs.c")) c.cost_c = parse_double(*e, "env.costs.c");
  if (const RawEntry* e = store.find("env.costs.salvage")) c.cost_salvage = parse_double(*e, "env.costs.salvage");
  if (const RawEntry* e = store.find("env.demand.kind")) c.demand_kind = e->value;
  if (const RawEntry* e = store.find("env.demand.width")) c.width = parse_double(*e, "env.demand.width");
  if (const RawEntry* e = store.find("hql.radius_mode")) c.hql_radius_mode = e->value;
  if (const RawEntry* e = store.find("qlucb.bonus_scale")) c.qlucb_bonus_scale = parse_double(*e, "qlucb.bonus_scale");
  if (const RawEntry* e = store.find("aggql.agg_step")) c.aggql_agg_step = parse_double(*e, "aggql.agg_step");
  if (const RawEntry* e = store.find("run.reps")) c.reps = static_cast<int>(parse_int(*e, "run.reps"));
  if (const RawEntry* e = store.find("run.base_seed")) {
    c.base_seed = static_cast<std::uint64_t>(parse_int(*e, "run.base_seed"));
  }
  if (const RawEntry* e = store.find("run.parallel_workers")) {
    c.workers = static_cast<int>(parse_int(*e, "run.parallel_workers"));
  }
  if (const RawEntry* e = store.find("run.x1")) c.x1 = parse_double(*e, "run.x1");
  if (const RawEntry* e = store.find("out.dir")) c.out_dir = e->value;

  for (const auto& [key, entry] : store.entries) {
    if (!store.consumed.count(key)) fail(entry.line, "unknown key '" + key + "'");
  }
  return c;
}

CliConfig parse_cli_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_cli_text(ss.str());
}

std::string emit_config(const CliConfig& c) {
  std::ostringstream out;
  const EnvKind kind = kind_from_string(c.env_kind);
  out << "env.kind=" << c.env_kind << "\n";
  out << "env.H=" << c.H << "\n";
  out << "env.K=" << c.K << "\n";
  const std::string fb =
      c.feedback.empty() ? to_string(default_feedback(kind)) : c.feedback;
  out << "env.feedback=" << fb << "\n";
  if (kind == EnvKind::backlogged || kind == EnvKind::lost_sales) {
    out << "env.costs.o=" << format_double(c.cost_o) << "\n";
    if (kind == EnvKind::backlogged) {
      out << "env.costs.b=" << format_double(c.cost_b) << "\n";
    } else {
      out << "env.costs.p=" << format_double(c.cost_p) << "\n";
    }
    out << "env.costs.c=" << format_double(c.cost_c) << "\n";
    out << "env.costs.salvage=" << format_double(c.cost_salvage) << "\n";
    out << "env.demand.kind=" << c.demand_kind << "\n";
    out << "env.demand.offset_rule=" << c.offset_rule << "\n";
    out << "env.demand.width=" << format_double(c.width) << "\n";
  } else if (kind == EnvKind::auction) {
    out << "env.bidders=" << c.bidders << "\n";
  } else {
    out << "env.lb.scale=" << format_double(c.lb_scale) << "\n";
  }
  out << "grid.max=" << format_double(c.grid_max) << "\n";
  out << "grid.step=" << format_double(c.grid_step) << "\n";
  std::string joined;
  for (const auto& a : c.agents) {
    if (!joined.empty()) joined += ",";
    joined += a;
  }
  out << "agents=" << joined << "\n";
  if (has_agent(c, "hql")) out << "hql.radius_mode=" << c.hql_radius_mode << "\n";
  if (has_agent(c, "qlucb")) {
    out << "qlucb.bonus_scale=" << format_double(c.qlucb_bonus_scale) << "\n";
  }
  if (has_agent(c, "aggql")) {
    out << "aggql.agg_step=" << format_double(c.aggql_agg_step) << "\n";
  }
  out << "run.reps=" << c.reps << "\n";
  out << "run.base_seed=" << c.base_seed << "\n";
  out << "run.parallel_workers=" << c.workers << "\n";
  out << "run.x1=" << format_double(c.x1) << "\n";
  out << "out.dir=" << c.out_dir << "\n";
  return out.str();
}

ExperimentConfig to_experiment(const CliConfig& c) {
  const EnvKind kind = kind_from_string(c.env_kind);
  if (c.H < 1) throw ConfigError("env.H must be >= 1");
  if (c.K < 1) throw ConfigError("env.K must be >= 1");
  if (c.reps < 1) throw ConfigError("run.reps must be >= 1");
  if (c.workers < 1) throw ConfigError("run.parallel_workers must be >= 1");
  if (c.agents.empty()) throw ConfigError("agents list is empty");

  ExperimentConfig ec;
  if (kind == EnvKind::lower_bound) {
    try {
      ec.spec = make_lower_bound_env(c.H, c.K, c.lb_scale);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    EnvSpec spec;
    spec.kind = kind;
    spec.H = c.H;
    try {
      spec.grid = build_action_grid(c.grid_max, c.grid_step);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    spec.feedback = c.feedback.empty() ? default_feedback(kind)
                                       : feedback_from_string(c.feedback);
    spec.bidders = c.bidders;
    if (kind != EnvKind::auction) {
      if (c.demand_kind != "uniform-offset") {
        throw ConfigError("env.demand.kind: unsupported '" + c.demand_kind + "'");
      }
      spec.demand.kind = DemandKind::uniform_offset;
      spec.demand.width = c.width;
      spec.demand.offset.resize(c.H);
      for (int h = 0; h < c.H; ++h) {
        if (c.offset_rule == "decreasing") {
          spec.demand.offset[h] = (10.0 - (h + 1)) / 2.0;
        } else if (c.offset_rule == "increasing") {
          spec.demand.offset[h] = h + 1.0;
        } else {
          throw ConfigError("env.demand.offset_rule: unknown '" + c.offset_rule + "'");
        }
      }
      // the unused coefficient (penalty for backlogged, backlog for
      // lost-sales) mirrors the used one so amortization does not
      // reject on a vector the model never reads
      const double b_eff = kind == EnvKind::backlogged ? c.cost_b : c.cost_p;
      const double p_eff = kind == EnvKind::lost_sales ? c.cost_p : c.cost_b;
      CostParams costs = CostParams::uniform(c.H, c.cost_o, b_eff, p_eff,
                                             c.cost_c, c.cost_salvage);
      try {
        spec.costs = amortize_costs(costs, c.H);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    ec.spec = spec;
  }
  try {
    ec.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  for (const auto& name : c.agents) {
    AgentConfig ac;
    ac.kind = agent_from_string(name);
    if (c.hql_radius_mode == "theory") {
      ac.params.radius_mode = RadiusMode::theory;
    } else if (c.hql_radius_mode == "experiment") {
      ac.params.radius_mode = RadiusMode::experiment;
    } else {
      throw ConfigError("hql.radius_mode: unknown '" + c.hql_radius_mode + "'");
    }
    ac.params.bonus_scale = c.qlucb_bonus_scale;
    ac.params.agg_step = c.aggql_agg_step;
    ec.agents.push_back(ac);
  }

  ec.K = c.K;
  ec.reps = c.reps;
  ec.base_seed = c.base_seed;
  ec.x1 = c.x1;
  ec.workers = c.workers;
  ec.out_dir = c.out_dir;
  ec.validate();
  return ec;
}

ExperimentConfig parse_config(const std::string& path) {
  return to_experiment(parse_cli_file(path));
}

CliConfig table_preset(int table_id, int H, long K) {
  if (table_id < 2 || table_id > 5) {
    throw ConfigError("table id must be one of 2, 3, 4, 5");
  }
  CliConfig c;
  c.H = H;
  c.K = K;
  c.cost_o = 2.0;
  c.reps = 300;
  const bool backlogged = table_id == 2 || table_id == 3;
  const bool decreasing = table_id == 2 || table_id == 5;
  c.env_kind = backlogged ? "backlogged" : "lost-sales";
  if (backlogged) {
    c.cost_b = 10.0;
  } else {
    c.cost_p = 10.0;
  }
  c.offset_rule = decreasing ? "decreasing" : "increasing";
  c.grid_max = decreasing ? 10.0 : 2.0 * H;
  c.grid_step = 0.05;
  c.aggql_agg_step = decreasing ? 1.0 : 0.5;
  if (backlogged) {
    c.agents = {"fql", "hql", "aggql", "qlucb"};
  } else {
    c.agents = {"hql", "aggql", "qlucb"};
  }
  c.out_dir = "out/table" + std::to_string(table_id) + "_H" + std::to_string(H) +
              "_K" + std::to_string(K);
  return c;
}

}  // namespace osfrl
