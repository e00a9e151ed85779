#include <sstream>

#include "qmem/runner.hpp"

namespace qmem {

namespace {

std::string number_label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

RunSpec two_symbol(int controls, double p_coh) {
  RunSpec s;
  s.task = TaskKind::invasion;
  s.invasion.variant = InvasionVariant::two_symbol;
  s.invasion.reward_correct = 1.0;
  s.invasion.reward_wrong = -1.0;
  s.invasion.p_coh = p_coh;
  s.glow.alpha = 1e-3;
  s.controls = controls;
  s.hamiltonians = HamiltonianCase::case_I;
  s.metrics = {"reward"};
  return s;
}

RunSpec four_percept(InvasionVariant variant, int controls) {
  RunSpec s;
  s.task = TaskKind::invasion;
  s.invasion.variant = variant;
  s.invasion.reward_correct = 1.0;
  s.invasion.reward_wrong = -10.0;
  s.glow.alpha = 1e-2;
  s.controls = controls;
  s.hamiltonians = HamiltonianCase::case_II;
  s.metrics = {"reward"};
  return s;
}

RunSpec grid_glow(double eta, std::optional<double> penalty) {
  RunSpec s;
  s.task = TaskKind::grid;
  s.grid.boundary_penalty = penalty;
  s.glow.alpha = 1e-1;
  s.glow.eta = eta;
  s.controls = 64;
  s.hamiltonians = HamiltonianCase::case_I;
  s.metrics = {"length"};
  s.label = "eta_" + number_label(eta) + (penalty ? "_penalty" : "_goal_only");
  return s;
}

ExperimentConfig experiment(std::string name, std::string description, std::vector<RunSpec> curves,
                            int agents, long budget) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.curves = std::move(curves);
  c.agents = agents;
  c.budget = budget;
  return c;
}

}  // namespace

std::vector<ExperimentConfig> preset_catalog() {
  std::vector<ExperimentConfig> out;

  {
    std::vector<RunSpec> curves;
    for (int n : {1, 2, 3, 4, 8, 16}) {
      curves.push_back(two_symbol(n, 1.0));
      curves.back().label = "controls_" + std::to_string(n);
    }
    out.push_back(experiment("fig5a", "2x2 invasion game, control-count sweep", std::move(curves), 100, 4000));
  }
  {
    std::vector<RunSpec> curves;
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      curves.push_back(two_symbol(16, p));
      curves.back().invasion.reversal_cycle = 4000;
      curves.back().metrics = {"reward", "gnorm"};
      curves.back().label = "pcoh_" + number_label(p);
    }
    out.push_back(experiment("fig5b", "2x2 invasion game with reversal, p_coh sweep", std::move(curves), 100, 8000));
  }
  {
    RunSpec s = two_symbol(32, 1.0);
    s.hamiltonians = HamiltonianCase::case_II;
    s.label = "controls_32_case_II";
    out.push_back(experiment("fig5c", "2x2 invasion game, tensor-structured Hamiltonians", {s}, 100, 10000));
  }
  for (const bool reversal : {true, false}) {
    std::vector<RunSpec> curves;
    for (int n : {1, 2, 3, 4, 8, 16, 32}) {
      RunSpec s = four_percept(reversal ? InvasionVariant::four_percept_4act
                                        : InvasionVariant::four_percept_2act, n);
      if (reversal) s.invasion.reversal_cycle = 5000;
      else s.invasion.color_introduction_cycle = 5000;
      s.label = "controls_" + std::to_string(n);
      curves.push_back(std::move(s));
    }
    if (reversal)
      out.push_back(experiment("fig7a", "4 percepts to 4 actions, reversal of symbols and colours",
                               std::move(curves), 100, 10000));
    else
      out.push_back(experiment("fig7b", "4 percepts to 2 actions, second colour introduced",
                               std::move(curves), 100, 10000));
  }
  {
    std::vector<RunSpec> curves;
    for (BasisMode m : {BasisMode::single_onb, BasisMode::random_onb_per_cycle}) {
      RunSpec s = four_percept(InvasionVariant::four_percept_4act, 16);
      s.invasion.basis_mode = m;
      s.metrics = {"reward", "F", "D"};
      s.label = m == BasisMode::single_onb ? "single_onb" : "multi_onb";
      curves.push_back(std::move(s));
    }
    out.push_back(experiment("fig8", "single versus random percept bases; reward, fidelity, distance",
                             std::move(curves), 100, 20000));
  }
  {
    RunSpec s;
    s.task = TaskKind::invasion;
    s.invasion.variant = InvasionVariant::neverending_color;
    s.invasion.reward_correct = 1.0;
    s.invasion.reward_wrong = -10.0;
    s.glow.alpha = 1e-2;
    s.controls = 64;
    s.hamiltonians = HamiltonianCase::schmidt;
    s.metrics = {"reward", "hnorm"};
    s.label = "neverending";
    auto e = experiment("fig9", "never-ending colours, single agent", {s}, 1, 100000);
    e.record_every = 100;
    out.push_back(std::move(e));
  }
  {
    RunSpec s = grid_glow(0.7, -10.0);
    out.push_back(experiment("fig10", "grid world policy after training (as fig11d)", {s}, 1, 10000));
    s.grid.random_start = true;
    s.label += "_random_start";
    out.push_back(experiment("fig10_random_start", "grid world policy with random start cells", {s}, 1, 100000));
  }
  const std::pair<const char*, RunSpec> fig11[] = {
      {"fig11a", grid_glow(1.0, std::nullopt)}, {"fig11b", grid_glow(0.01, std::nullopt)},
      {"fig11c", grid_glow(1.0, -10.0)},        {"fig11d", grid_glow(0.7, -10.0)},
      {"fig11e", grid_glow(0.5, -10.0)},
  };
  for (const auto& [name, spec] : fig11)
    out.push_back(experiment(name, "grid world episode lengths, " + spec.label, {spec}, 1, 10000));
  {
    RunSpec s;
    s.task = TaskKind::grid;
    s.learner = LearnerKind::random_walk;
    s.metrics = {"length"};
    s.label = "random_walk";
    out.push_back(experiment("fig11f", "grid world random walk (learning disabled)", {s}, 1, 10000));
  }
  {
    std::vector<RunSpec> curves;
    for (bool penalty : {false, true})
      for (double eta : {1.0, 0.9, 0.7, 0.5, 0.3})
        curves.push_back(grid_glow(eta, penalty ? std::optional<double>(-10.0) : std::nullopt));
    auto e = experiment("fig12", "grid world last-500 episode lengths, glow sweep", std::move(curves), 1, 10000);
    e.tail_summary = true;
    out.push_back(std::move(e));
  }
  {
    RunSpec s;
    s.task = TaskKind::grid;
    s.learner = LearnerKind::ps;
    s.metrics = {"length"};
    s.label = "ps";
    out.push_back(experiment("ps_grid", "projective simulation baseline on the grid world", {s}, 10, 2000));
    s.learner = LearnerKind::sarsa;
    s.label = "sarsa";
    out.push_back(experiment("sarsa_grid", "SARSA(lambda) baseline on the grid world", {s}, 10, 2000));
    s.learner = LearnerKind::tabular_pg;
    s.glow.eta = 0.7;
    s.label = "tabular_pg";
    out.push_back(experiment("pg_grid", "tabular policy gradient with glow on the grid world", {s}, 10, 2000));
  }
  {
    RunSpec s = two_symbol(1, 1.0);
    s.learner = LearnerKind::ps;
    s.invasion.reward_wrong = 0.0;
    s.ps.eta = 1.0;
    s.label = "ps";
    out.push_back(experiment("ps_invasion", "projective simulation on the 2x2 invasion game", {s}, 100, 4000));
  }
  return out;
}

ExperimentConfig preset(const std::string& name) {
  for (auto& p : preset_catalog())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace qmem
