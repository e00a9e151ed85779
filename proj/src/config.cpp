#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qmem/runner.hpp"

namespace qmem {

namespace {

namespace pt = boost::property_tree;

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

template <class E>
E to_enum(const std::string& key, const std::string& v, const std::map<std::string, E>& names) {
  const auto it = names.find(v);
  if (it == names.end()) throw ConfigError(key + ": unknown value '" + v + "'");
  return it->second;
}

std::optional<long> to_optional_long(const std::string& key, const std::string& v) {
  if (v == "none") return std::nullopt;
  return to_long(key, v);
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& v)>;

/// Applies a curve-level setter to every curve.
Setter each_curve(std::function<void(RunSpec&, const std::string&, const std::string&)> f) {
  return [f](ExperimentConfig& cfg, const std::string& key, const std::string& v) {
    for (auto& c : cfg.curves) f(c, key, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["experiment.preset"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (v != c.name) throw ConfigError(k + ": file names preset '" + v + "' but '" + c.name + "' is loaded");
    };
    t["experiment.seed"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const long s = to_long(k, v);
      if (s < 0) throw ConfigError(k + ": seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    t["experiment.agents"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.agents = static_cast<int>(to_long(k, v));
    };
    t["experiment.budget"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.budget = to_long(k, v);
    };
    t["experiment.workers"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.workers = static_cast<int>(to_long(k, v));
    };
    t["experiment.record_every"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.record_every = to_long(k, v);
    };

    t["agent.learner"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.learner = to_enum<LearnerKind>(k, v, {{"glow", LearnerKind::glow}, {"ps", LearnerKind::ps},
                                              {"sarsa", LearnerKind::sarsa},
                                              {"tabular_pg", LearnerKind::tabular_pg},
                                              {"random_walk", LearnerKind::random_walk}});
    });
    t["agent.alpha"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.glow.alpha = to_double(k, v); });
    t["agent.eta"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.glow.eta = to_double(k, v); });
    t["agent.kappa"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.glow.kappa = to_double(k, v); });
    t["agent.controls"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.controls = static_cast<int>(to_long(k, v));
    });
    t["agent.hamiltonians"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.hamiltonians = to_enum<HamiltonianCase>(k, v, {{"I", HamiltonianCase::case_I},
                                                       {"II", HamiltonianCase::case_II},
                                                       {"schmidt", HamiltonianCase::schmidt}});
    });
    t["agent.reset_trace_on_episode"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.reset_trace_on_episode = to_bool(k, v);
    });

    t["estimator.source"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.estimator.source = to_enum<GradientSource>(
          k, v, {{"analytic", GradientSource::analytic},
                 {"finite_difference", GradientSource::finite_difference},
                 {"sampled_difference", GradientSource::sampled_difference},
                 {"neural_gas", GradientSource::neural_gas}});
    });
    t["estimator.delta"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.estimator.delta = to_double(k, v); });
    t["estimator.samples"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.estimator.samples = static_cast<int>(to_long(k, v));
    });
    t["estimator.cloud_samples"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.estimator.cloud.n_samples = static_cast<int>(to_long(k, v));
    });
    t["estimator.sigma"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.estimator.cloud.sigma = to_double(k, v); });
    t["estimator.sigma_decay"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.estimator.cloud.sigma_decay = to_double(k, v); });

    t["invasion.variant"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.invasion.variant = to_enum<InvasionVariant>(
          k, v, {{"two_symbol", InvasionVariant::two_symbol},
                 {"four_percept_4act", InvasionVariant::four_percept_4act},
                 {"four_percept_2act", InvasionVariant::four_percept_2act},
                 {"neverending_color", InvasionVariant::neverending_color}});
    });
    t["invasion.reward_correct"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.invasion.reward_correct = to_double(k, v); });
    t["invasion.reward_wrong"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.invasion.reward_wrong = to_double(k, v); });
    t["invasion.p_coh"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.invasion.p_coh = to_double(k, v); });
    t["invasion.reversal_cycle"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.invasion.reversal_cycle = to_optional_long(k, v);
    });
    t["invasion.color_introduction_cycle"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.invasion.color_introduction_cycle = to_optional_long(k, v);
    });
    t["invasion.basis_mode"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.invasion.basis_mode = to_enum<BasisMode>(
          k, v, {{"single_onb", BasisMode::single_onb},
                 {"random_onb_per_cycle", BasisMode::random_onb_per_cycle}});
    });

    t["grid.boundary_penalty"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      if (v == "none") s.grid.boundary_penalty.reset();
      else s.grid.boundary_penalty = to_double(k, v);
    });
    t["grid.goal_reward"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.grid.goal_reward = to_double(k, v); });
    t["grid.random_start"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.grid.random_start = to_bool(k, v); });
    t["grid.max_episode_cycles"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.max_episode_cycles = to_long(k, v); });
    const std::pair<const char*, Cell GridWorld::*> cells[] = {
        {"start", &GridWorld::start}, {"goal", &GridWorld::goal}, {"obstacle", &GridWorld::obstacle}};
    for (const auto& [name, member] : cells) {
      t[std::string("grid.") + name + "_row"] = each_curve([member](RunSpec& s, const std::string& k, const std::string& v) {
        (s.grid.*member).row = static_cast<int>(to_long(k, v));
      });
      t[std::string("grid.") + name + "_col"] = each_curve([member](RunSpec& s, const std::string& k, const std::string& v) {
        (s.grid.*member).col = static_cast<int>(to_long(k, v));
      });
    }

    t["ps.gamma_damp"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.ps.gamma_damp = to_double(k, v); });
    t["ps.h_eq"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.ps.h_eq = to_double(k, v); });
    t["ps.eta"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.ps.eta = to_double(k, v); });
    t["ps.policy"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.ps.kind = to_enum<PolicyKind>(k, v, {{"linear", PolicyKind::linear}, {"softmax", PolicyKind::softmax}});
    });
    t["pg.alpha"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.pg_alpha = to_double(k, v); });

    t["sarsa.alpha"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.sarsa.alpha = to_double(k, v); });
    t["sarsa.gamma"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.sarsa.gamma = to_double(k, v); });
    t["sarsa.lambda"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.sarsa.lambda = to_double(k, v); });
    t["sarsa.epsilon"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) { s.sarsa.epsilon = to_double(k, v); });
    t["sarsa.trace"] = each_curve([](RunSpec& s, const std::string& k, const std::string& v) {
      s.sarsa.trace = to_enum<TraceKind>(k, v, {{"accumulating", TraceKind::accumulating}, {"replacing", TraceKind::replacing}});
    });
    return t;
  }();
  return table;
}

void apply_tree(ExperimentConfig& cfg, const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError("unknown config key '" + full + "'");
      it->second(cfg, full, value.data());
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

pt::ptree parse(std::istream& in, const std::string& where) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(where + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  return tree;
}

}  // namespace

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  apply_tree(cfg, parse(in, "config"));
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  apply_tree(cfg, parse(in, path.string()));
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  const pt::ptree tree = parse(in, path.string());
  const auto name = tree.get_optional<std::string>("experiment.preset");
  if (!name) throw ConfigError(path.string() + ": missing [experiment] preset");
  ExperimentConfig cfg = preset(*name);
  apply_tree(cfg, tree);
  return cfg;
}

}  // namespace qmem
