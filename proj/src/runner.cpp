#include "qmem/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qmem/metrics.hpp"

namespace qmem {

const char* learner_name(LearnerKind k) {
  switch (k) {
    case LearnerKind::glow: return "glow";
    case LearnerKind::ps: return "ps";
    case LearnerKind::sarsa: return "sarsa";
    case LearnerKind::tabular_pg: return "tabular_pg";
    case LearnerKind::random_walk: return "random_walk";
  }
  return "?";
}

const char* hamiltonian_case_name(HamiltonianCase c) {
  switch (c) {
    case HamiltonianCase::case_I: return "I";
    case HamiltonianCase::case_II: return "II";
    case HamiltonianCase::schmidt: return "schmidt";
  }
  return "?";
}

namespace {

bool is_discrete(const RunSpec& s) {
  return s.task == TaskKind::grid || s.invasion.variant != InvasionVariant::neverending_color;
}

int percept_count(const RunSpec& s) {
  if (s.task == TaskKind::grid) return s.grid.free_count();
  return s.invasion.variant == InvasionVariant::two_symbol ? 2 : 4;
}

int action_count(const RunSpec& s) {
  return s.task == TaskKind::grid ? kGridActions : s.invasion.action_count();
}

}  // namespace

void RunSpec::validate() const {
  if (task == TaskKind::invasion) {
    InvasionConfig probe = invasion;
    if (!probe.u_target && (probe.variant == InvasionVariant::four_percept_4act ||
                            probe.variant == InvasionVariant::four_percept_2act))
      probe.u_target = CMatrix::Identity(4, 4);
    probe.validate();
  } else {
    grid.validate();
    if (max_episode_cycles < 1) throw ConfigError("max_episode_cycles must be positive");
  }
  if (learner == LearnerKind::glow) {
    glow.validate();
    if (controls < 1) throw ConfigError("controls must be positive");
  } else if (!is_discrete(*this)) {
    throw ConfigError("tabular learners need a discrete percept set");
  }
  static const std::vector<std::string> invasion_metrics{"reward", "F", "D", "hnorm", "gnorm"};
  for (const auto& m : metrics) {
    const bool ok = task == TaskKind::grid
                        ? m == "length"
                        : std::find(invasion_metrics.begin(), invasion_metrics.end(), m) !=
                              invasion_metrics.end();
    if (!ok) throw ConfigError("metric '" + m + "' is not available for this task");
    if ((m == "F" || m == "D" || m == "hnorm" || m == "gnorm") && learner != LearnerKind::glow)
      throw ConfigError("metric '" + m + "' needs the glow learner");
    if ((m == "F" || m == "D") && invasion.variant != InvasionVariant::four_percept_4act &&
        invasion.variant != InvasionVariant::four_percept_2act)
      throw ConfigError("metric '" + m + "' needs a target unitary");
  }
  if (metrics.empty()) throw ConfigError("a curve needs at least one metric");
}

void ExperimentConfig::validate() const {
  if (curves.empty()) throw ConfigError("experiment has no curves");
  if (agents < 1) throw ConfigError("agents must be positive");
  if (budget < 1) throw ConfigError("budget must be positive");
  if (record_every < 1) throw ConfigError("record_every must be positive");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  for (const auto& c : curves) c.validate();
}

// ---------------------------------------------------------------------------
// Learners

namespace {

struct Observation {
  int index = 0;
  const DensityMatrix* state = nullptr;
  const PovmSet* povm = nullptr;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual StepOutcome act(const Observation& obs, RngStream& rng) = 0;
  virtual void reward(double r) = 0;
  virtual void end_episode(bool terminal) = 0;
  virtual std::vector<double> policy(const Observation& obs) const = 0;
  virtual const GlowAgent* glow() const { return nullptr; }
  virtual std::uint64_t internal_cycles() const { return 0; }
};

class GlowLearner : public Learner {
 public:
  GlowLearner(std::shared_ptr<const LayerPropagator> memory, const RunSpec& spec)
      : agent_(std::move(memory), spec.glow), reset_(spec.reset_trace_on_episode) {
    agent_.set_estimator(spec.estimator);
  }
  StepOutcome act(const Observation& obs, RngStream& rng) override {
    return agent_.step(*obs.state, *obs.povm, rng);
  }
  void reward(double r) override { agent_.apply_reward(r); }
  void end_episode(bool) override {
    if (reset_) agent_.reset_episode();
  }
  std::vector<double> policy(const Observation& obs) const override {
    return agent_.policy(*obs.state, *obs.povm);
  }
  const GlowAgent* glow() const override { return &agent_; }
  std::uint64_t internal_cycles() const override { return agent_.internal_cycles(); }

 private:
  GlowAgent agent_;
  bool reset_;
};

class PsLearner : public Learner {
 public:
  PsLearner(const RunSpec& spec, int states, int actions)
      : table_(states, actions, spec.ps.gamma_damp, spec.ps.h_eq, spec.ps.eta, spec.ps.kind),
        reset_(spec.reset_trace_on_episode) {}
  StepOutcome act(const Observation& obs, RngStream& rng) override {
    StepOutcome out{0, ps_policy(table_, obs.index)};
    out.action = sample_action(out.distribution, rng);
    s_ = obs.index;
    a_ = static_cast<int>(out.action);
    return out;
  }
  void reward(double r) override { ps_update(table_, s_, a_, r); }
  void end_episode(bool) override {
    if (reset_) table_.g.setZero();
  }
  std::vector<double> policy(const Observation& obs) const override {
    return ps_policy(table_, obs.index);
  }

 private:
  EdgeTable table_;
  bool reset_;
  int s_ = 0;
  int a_ = 0;
};

class TabularPgLearner : public Learner {
 public:
  TabularPgLearner(const RunSpec& spec, int states, int actions)
      : h_(Eigen::MatrixXd::Constant(states, actions, spec.ps.kind == PolicyKind::linear ? 1.0 : 0.0)),
        e_(Eigen::MatrixXd::Zero(states, actions)),
        kind_(spec.ps.kind), alpha_(spec.pg_alpha), eta_(spec.glow.eta),
        reset_(spec.reset_trace_on_episode) {}
  StepOutcome act(const Observation& obs, RngStream& rng) override {
    StepOutcome out{0, row_policy(h_, kind_, obs.index)};
    out.action = sample_action(out.distribution, rng);
    e_ = (1.0 - eta_) * e_ + tabular_pg_trace(h_, kind_, obs.index, static_cast<int>(out.action));
    return out;
  }
  void reward(double r) override {
    if (r != 0.0) h_ += (alpha_ * r) * e_;
  }
  void end_episode(bool) override {
    if (reset_) e_.setZero();
  }
  std::vector<double> policy(const Observation& obs) const override {
    return row_policy(h_, kind_, obs.index);
  }

 private:
  Eigen::MatrixXd h_;
  Eigen::MatrixXd e_;
  PolicyKind kind_;
  double alpha_;
  double eta_;
  bool reset_;
};

class SarsaLearner : public Learner {
 public:
  SarsaLearner(const RunSpec& spec, int states, int actions)
      : table_(states, actions, spec.sarsa.alpha, spec.sarsa.gamma, spec.sarsa.lambda,
               spec.sarsa.trace),
        epsilon_(spec.sarsa.epsilon) {}
  StepOutcome act(const Observation& obs, RngStream& rng) override {
    StepOutcome out{epsilon_greedy(table_.q, obs.index, epsilon_, rng), policy(obs)};
    if (pending_)
      sarsa_lambda_update(table_, s_, a_, r_, obs.index, static_cast<int>(out.action), false);
    pending_ = true;
    s_ = obs.index;
    a_ = static_cast<int>(out.action);
    r_ = 0;
    return out;
  }
  void reward(double r) override { r_ = r; }
  void end_episode(bool terminal) override {
    if (pending_ && terminal) sarsa_lambda_update(table_, s_, a_, r_, s_, a_, true);
    pending_ = false;
    table_.reset_traces();
  }
  std::vector<double> policy(const Observation& obs) const override {
    const auto row = table_.q.row(obs.index);
    const double best = row.maxCoeff();
    const auto n = row.size();
    int ties = 0;
    for (Eigen::Index a = 0; a < n; ++a) ties += row(a) == best;
    std::vector<double> p(n, epsilon_ / n);
    for (Eigen::Index a = 0; a < n; ++a)
      if (row(a) == best) p[a] += (1.0 - epsilon_) / ties;
    return p;
  }

 private:
  ValueTable table_;
  double epsilon_;
  bool pending_ = false;
  int s_ = 0;
  int a_ = 0;
  double r_ = 0;
};

class RandomWalkLearner : public Learner {
 public:
  explicit RandomWalkLearner(int actions) : actions_(actions) {}
  StepOutcome act(const Observation&, RngStream& rng) override {
    StepOutcome out{0, random_walk_policy(actions_)};
    out.action = sample_action(out.distribution, rng);
    return out;
  }
  void reward(double) override {}
  void end_episode(bool) override {}
  std::vector<double> policy(const Observation&) const override {
    return random_walk_policy(actions_);
  }

 private:
  int actions_;
};

std::pair<int, int> case_II_split(const RunSpec& s) {
  if (s.task == TaskKind::grid) return {s.grid.free_count(), kGridActions};
  return s.invasion.variant == InvasionVariant::neverending_color ? std::pair{4, 2}
                                                                  : std::pair{2, 2};
}

std::shared_ptr<const LayerPropagator> build_memory(const RunSpec& s, RngStream& rng) {
  const int dim = s.task == TaskKind::grid ? s.grid.free_count() * kGridActions
                                           : s.invasion.memory_dim();
  std::pair<CMatrix, CMatrix> h;
  switch (s.hamiltonians) {
    case HamiltonianCase::case_I:
      h = case_I_hamiltonians(dim, rng);
      break;
    case HamiltonianCase::case_II: {
      const auto [ds, da] = case_II_split(s);
      h = case_II_hamiltonians(ds, da, rng);
      break;
    }
    case HamiltonianCase::schmidt: {
      const auto raw = case_I_hamiltonians(dim, rng);
      h = schmidt_orthonormalize(raw.first, raw.second);
      break;
    }
  }
  return std::make_shared<const LayerPropagator>(
      HamiltonianStack::alternating(h.first, h.second, s.controls));
}

std::unique_ptr<Learner> make_learner(const RunSpec& s, RngStream& ham_rng) {
  switch (s.learner) {
    case LearnerKind::glow: return std::make_unique<GlowLearner>(build_memory(s, ham_rng), s);
    case LearnerKind::ps: return std::make_unique<PsLearner>(s, percept_count(s), action_count(s));
    case LearnerKind::sarsa:
      return std::make_unique<SarsaLearner>(s, percept_count(s), action_count(s));
    case LearnerKind::tabular_pg:
      return std::make_unique<TabularPgLearner>(s, percept_count(s), action_count(s));
    case LearnerKind::random_walk: return std::make_unique<RandomWalkLearner>(action_count(s));
  }
  throw ConfigError("unknown learner");
}

CMatrix experiment_target(std::uint64_t seed) {
  RngStream rng(seed, 0);
  return random_unitary(4, rng);
}

void run_invasion(const RunSpec& spec, long budget, long record_every, std::uint64_t seed,
                  Learner& learner, RngStream& env_rng, RngStream& act_rng, AgentTrace& out) {
  InvasionConfig ic = spec.invasion;
  if (!ic.u_target && (ic.variant == InvasionVariant::four_percept_4act ||
                       ic.variant == InvasionVariant::four_percept_2act))
    ic.u_target = experiment_target(seed);
  const InvasionGame game(ic);
  for (long t = 0; t < budget; ++t) {
    const bool record = (t + 1) % record_every == 0;
    const auto p = game.percept(t, env_rng);
    const Observation obs{invasion_percept_index(ic, p.symbol, p.color), &p.state, p.povm.get()};
    std::vector<double> row;
    if (record) {
      // Memory-derived metrics refer to the memory the percept meets.
      const GlowAgent* g = learner.glow();
      CMatrix u;
      if (g && ic.u_target) u = g->unitary();
      for (const auto& m : spec.metrics) {
        if (m == "F") row.push_back(avg_fidelity(u, *ic.u_target));
        else if (m == "D") row.push_back(distance_sq(u, *ic.u_target));
        else if (m == "hnorm") row.push_back(g->controls().norm());
        else if (m == "gnorm")
          row.push_back(g->gradient(p.state, p.povm->effect(invasion_correct_action(ic, t, obs.index)))
                            .cwiseAbs()
                            .maxCoeff());
        else row.push_back(0.0);  // reward, filled below
      }
    }
    const auto step = learner.act(obs, act_rng);
    const double r = game.reward(t, step.action, p);
    learner.reward(r);
    learner.end_episode(true);
    ++out.ledger.external;
    if (record) {
      const double expected = game.expected_reward(t, step.distribution, p);
      for (std::size_t k = 0; k < spec.metrics.size(); ++k)
        if (spec.metrics[k] == "reward") row[k] = expected;
      out.xs.push_back(t + 1);
      out.values.push_back(std::move(row));
    }
  }
}

void run_grid(const RunSpec& spec, long budget, long record_every, Learner& learner,
              RngStream& env_rng, RngStream& act_rng, AgentTrace& out) {
  const GridWorld& gw = spec.grid;
  const int n = gw.free_count();
  std::vector<DensityMatrix> states;
  states.reserve(n);
  for (int i = 0; i < n; ++i) states.push_back(grid_percept_state(gw, gw.cell_at(i)));
  const PovmSet povm = grid_povm(gw);
  auto observe = [&](Cell c) {
    const int i = gw.index_of(c);
    return Observation{i, &states[i], &povm};
  };

  out.episode_lengths.reserve(budget);
  for (long ep = 0; ep < budget; ++ep) {
    Cell cell = grid_reset(gw, env_rng);
    long steps = 0;
    bool terminal = false;
    while (!terminal && steps < spec.max_episode_cycles) {
      const auto step = learner.act(observe(cell), act_rng);
      const GridStep gs = grid_step(gw, cell, static_cast<int>(step.action));
      learner.reward(gs.reward);
      cell = gs.next;
      terminal = gs.terminal;
      ++steps;
    }
    learner.end_episode(terminal);
    out.ledger.external += static_cast<std::uint64_t>(steps);
    out.episode_lengths.push_back(static_cast<double>(steps));
    if ((ep + 1) % record_every == 0) {
      out.xs.push_back(ep + 1);
      out.values.push_back({static_cast<double>(steps)});
    }
  }
  out.grid_policy = grid_policy_table(
      [&](Cell c) {
        if (c == gw.goal) return random_walk_policy(kGridActions);
        return learner.policy(observe(c));
      },
      gw);
}

}  // namespace

AgentTrace run_agent(const RunSpec& spec, long budget, long record_every, std::uint64_t seed,
                     int index) {
  spec.validate();
  if (budget < 1) throw ConfigError("budget must be positive");
  const std::uint64_t base = 8ULL * (static_cast<std::uint64_t>(index) + 1);
  RngStream ham_rng(seed, base);
  RngStream env_rng(seed, base + 1);
  RngStream act_rng(seed, base + 2);
  auto learner = make_learner(spec, ham_rng);
  AgentTrace out;
  if (spec.task == TaskKind::invasion)
    run_invasion(spec, budget, record_every, seed, *learner, env_rng, act_rng, out);
  else
    run_grid(spec, budget, record_every, *learner, env_rng, act_rng, out);
  out.ledger.internal = learner->internal_cycles();
  return out;
}

// ---------------------------------------------------------------------------
// Ensembles

namespace {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

std::pair<double, double> mean_sem(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  const double n = static_cast<double>(xs.size());
  const double mean = s.value() / n;
  if (xs.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  CompensatedSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  return {mean, std::sqrt(sq.value() / (n - 1) / n)};
}

void run_parallel(std::size_t jobs, int workers, const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t n = workers > 0 ? static_cast<std::size_t>(workers) : hw;
  n = std::min(n, jobs);
  if (n <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      for (std::size_t j = next++; j < jobs; j = next++) {
        try {
          fn(j);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = jobs;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t agents = static_cast<std::size_t>(cfg.agents);
  std::vector<AgentTrace> traces(cfg.curves.size() * agents);
  run_parallel(traces.size(), cfg.workers, [&](std::size_t job) {
    const auto& spec = cfg.curves[job / agents];
    traces[job] = run_agent(spec, cfg.budget, cfg.record_every, cfg.seed,
                            static_cast<int>(job % agents));
  });

  EnsembleResult result;
  for (std::size_t c = 0; c < cfg.curves.size(); ++c) {
    const auto& spec = cfg.curves[c];
    CurveResult curve;
    curve.label = spec.label;
    curve.x_name = spec.task == TaskKind::grid ? "episode" : "cycle";
    curve.metrics = spec.metrics;
    curve.agents = cfg.agents;
    const AgentTrace& first = traces[c * agents];
    std::vector<double> column(agents);
    for (std::size_t r = 0; r < first.xs.size(); ++r) {
      CurveRecord rec;
      rec.x = first.xs[r];
      for (std::size_t m = 0; m < spec.metrics.size(); ++m) {
        for (std::size_t a = 0; a < agents; ++a) column[a] = traces[c * agents + a].values[r][m];
        const auto [mean, sem] = mean_sem(column);
        rec.mean.push_back(mean);
        rec.sem.push_back(sem);
      }
      curve.records.push_back(std::move(rec));
    }
    if (spec.task == TaskKind::grid) {
      const std::size_t window = std::min<std::size_t>(500, first.episode_lengths.size());
      for (std::size_t a = 0; a < agents; ++a)
        column[a] = glow_tail_average(traces[c * agents + a].episode_lengths, window);
      std::tie(curve.tail_mean, curve.tail_sem) = mean_sem(column);
    }
    for (std::size_t a = 0; a < agents; ++a) {
      result.ledger.external += traces[c * agents + a].ledger.external;
      result.ledger.internal += traces[c * agents + a].ledger.internal;
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

double glow_tail_average(const std::vector<double>& episode_lengths, std::size_t window) {
  if (window == 0) throw InvalidArgument("glow_tail_average: window must be positive");
  if (episode_lengths.size() < window)
    throw InvalidArgument("glow_tail_average: fewer episodes than the window");
  CompensatedSum s;
  for (std::size_t i = episode_lengths.size() - window; i < episode_lengths.size(); ++i)
    s.add(episode_lengths[i]);
  return s.value() / static_cast<double>(window);
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_csv(const CurveResult& curve) {
  std::string s = curve.x_name;
  for (const auto& m : curve.metrics) s += "," + m + "_mean," + m + "_sem";
  s += '\n';
  for (const auto& r : curve.records) {
    s += std::to_string(r.x);
    for (std::size_t m = 0; m < r.mean.size(); ++m)
      s += "," + format_double(r.mean[m]) + "," + format_double(r.sem[m]);
    s += '\n';
  }
  return s;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string curve_file(const ExperimentConfig& cfg, const CurveResult& c) {
  return cfg.name + "_" + c.label + ".csv";
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

nlohmann::ordered_json spec_json(const RunSpec& s) {
  nlohmann::ordered_json j;
  j["label"] = s.label;
  j["task"] = s.task == TaskKind::grid ? "grid" : "invasion";
  j["learner"] = learner_name(s.learner);
  if (s.learner == LearnerKind::glow) {
    j["alpha"] = s.glow.alpha;
    j["eta"] = s.glow.eta;
    j["kappa"] = s.glow.kappa;
    j["controls"] = s.controls;
    j["hamiltonians"] = hamiltonian_case_name(s.hamiltonians);
    j["reset_trace_on_episode"] = s.reset_trace_on_episode;
    static const char* sources[] = {"analytic", "finite_difference", "sampled_difference",
                                    "neural_gas"};
    j["estimator"] = sources[static_cast<int>(s.estimator.source)];
  }
  if (s.task == TaskKind::invasion) {
    static const char* variants[] = {"two_symbol", "four_percept_4act", "four_percept_2act",
                                     "neverending_color"};
    const auto& ic = s.invasion;
    j["variant"] = variants[static_cast<int>(ic.variant)];
    j["reward_correct"] = ic.reward_correct;
    j["reward_wrong"] = ic.reward_wrong;
    j["p_coh"] = ic.p_coh;
    j["reversal_cycle"] = optional_json(ic.reversal_cycle);
    j["color_introduction_cycle"] = optional_json(ic.color_introduction_cycle);
    j["basis_mode"] = ic.basis_mode == BasisMode::single_onb ? "single_onb" : "random_onb_per_cycle";
  } else {
    const auto& g = s.grid;
    j["boundary_penalty"] = optional_json(g.boundary_penalty);
    j["goal_reward"] = g.goal_reward;
    j["random_start"] = g.random_start;
    j["start"] = {g.start.row, g.start.col};
    j["goal"] = {g.goal.row, g.goal.col};
    j["obstacle"] = {g.obstacle.row, g.obstacle.col};
    j["max_episode_cycles"] = s.max_episode_cycles;
  }
  j["metrics"] = s.metrics;
  return j;
}

}  // namespace

void emit_csv(const CurveResult& curve, const std::filesystem::path& path) {
  write_file(path, format_csv(curve));
}

std::string manifest_json(const ExperimentConfig& cfg, const EnsembleResult& result) {
  nlohmann::ordered_json j;
  j["preset"] = cfg.name;
  j["description"] = cfg.description;
  j["seed"] = cfg.seed;
  j["agents"] = cfg.agents;
  j["budget"] = cfg.budget;
  j["record_every"] = cfg.record_every;
  j["external_cycles"] = result.ledger.external;
  j["internal_cycles"] = result.ledger.internal;
  j["total_cycles"] = result.ledger.external + result.ledger.internal;
  auto& curves = j["curves"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < cfg.curves.size(); ++c) {
    auto spec = spec_json(cfg.curves[c]);
    if (c < result.curves.size()) spec["file"] = curve_file(cfg, result.curves[c]);
    curves.push_back(std::move(spec));
  }
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg,
                                                 const EnsembleResult& result,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& c : result.curves) {
    written.push_back(dir / curve_file(cfg, c));
    emit_csv(c, written.back());
  }
  if (cfg.tail_summary) {
    std::string s = "curve,tail500_mean,tail500_sem\n";
    for (const auto& c : result.curves)
      s += c.label + "," + format_double(c.tail_mean) + "," + format_double(c.tail_sem) + "\n";
    written.push_back(dir / (cfg.name + "_summary.csv"));
    write_file(written.back(), s);
  }
  written.push_back(dir / (cfg.name + ".manifest.json"));
  write_file(written.back(), manifest_json(cfg, result));
  return written;
}

Eigen::MatrixXd train_grid_policy(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunSpec& spec = cfg.curves.front();
  if (spec.task != TaskKind::grid) throw ConfigError("preset '" + cfg.name + "' is not a grid task");
  return *run_agent(spec, cfg.budget, cfg.record_every, cfg.seed, 0).grid_policy;
}

std::string format_policy_csv(const Eigen::MatrixXd& table, const GridWorld& gw) {
  std::string s = "row,col";
  for (int a = 0; a < kGridActions; ++a) s += std::string(",") + grid_action_name(a);
  s += '\n';
  for (int i = 0; i < table.rows(); ++i) {
    const Cell c = gw.cell_at(i);
    s += std::to_string(c.row) + "," + std::to_string(c.col);
    for (int a = 0; a < kGridActions; ++a) s += "," + format_double(table(i, a));
    s += '\n';
  }
  return s;
}

}  // namespace qmem
