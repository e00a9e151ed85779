#pragma once

// Experiment orchestration: presets, seeded ensembles, curve aggregation and
// CSV output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qmem/agent.hpp"
#include "qmem/baselines.hpp"
#include "qmem/environments.hpp"

namespace qmem {

enum class TaskKind { invasion, grid };
enum class LearnerKind { glow, ps, sarsa, tabular_pg, random_walk };
enum class HamiltonianCase { case_I, case_II, schmidt };

const char* learner_name(LearnerKind k);
const char* hamiltonian_case_name(HamiltonianCase c);

struct PsSettings {
  double gamma_damp = 0.0;
  double h_eq = 1.0;
  double eta = 0.1;
  PolicyKind kind = PolicyKind::linear;
};

struct SarsaSettings {
  double alpha = 0.1;
  double gamma = 0.9;
  double lambda = 0.8;
  double epsilon = 0.1;
  TraceKind trace = TraceKind::accumulating;
};

/// Everything needed to produce one curve.
struct RunSpec {
  std::string label;
  TaskKind task = TaskKind::invasion;
  InvasionConfig invasion;
  GridWorld grid;
  LearnerKind learner = LearnerKind::glow;
  GlowParams glow;
  EstimatorSettings estimator;
  PsSettings ps;
  SarsaSettings sarsa;
  double pg_alpha = 0.1;
  int controls = 16;
  HamiltonianCase hamiltonians = HamiltonianCase::case_I;
  bool reset_trace_on_episode = true;
  long max_episode_cycles = 100000;  // grid episodes are cut here
  std::vector<std::string> metrics;  // invasion: reward, F, D, hnorm, gnorm; grid: length

  void validate() const;
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  std::vector<RunSpec> curves;
  int agents = 100;
  long budget = 1000;  // cycles (invasion) or episodes (grid)
  std::uint64_t seed = 1;
  int workers = 0;     // 0: hardware concurrency
  long record_every = 1;
  bool tail_summary = false;  // grid: last-500 averages per curve

  void validate() const;
};

/// All presets in catalog order.
std::vector<ExperimentConfig> preset_catalog();
/// Throws ConfigError for an unknown name.
ExperimentConfig preset(const std::string& name);

/// Applies overrides from a sectioned key = value file. Unknown sections or
/// keys are ConfigError.
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);
void apply_config_text(ExperimentConfig& cfg, const std::string& text);
/// Reads [experiment] preset from the file, then applies the remaining keys.
ExperimentConfig load_config_file(const std::filesystem::path& path);

struct CurveRecord {
  long x = 0;
  std::vector<double> mean;
  std::vector<double> sem;
};

struct CurveResult {
  std::string label;
  std::string x_name;  // "cycle" or "episode"
  std::vector<std::string> metrics;
  std::vector<CurveRecord> records;
  int agents = 0;
  double tail_mean = 0;  // grid: mean over agents of the last-500 average
  double tail_sem = 0;
};

struct CycleLedger {
  std::uint64_t external = 0;
  std::uint64_t internal = 0;
};

struct EnsembleResult {
  std::vector<CurveResult> curves;
  CycleLedger ledger;
};

/// Per-agent output of one curve.
struct AgentTrace {
  std::vector<std::vector<double>> values;  // [record][metric]
  std::vector<long> xs;
  CycleLedger ledger;
  std::optional<Eigen::MatrixXd> grid_policy;  // final 8 x 4 table
  std::vector<double> episode_lengths;
};

/// Runs agent `index` of a curve. Streams are derived from (seed, index) only.
AgentTrace run_agent(const RunSpec& spec, long budget, long record_every, std::uint64_t seed,
                     int index);

EnsembleResult run_ensemble(const ExperimentConfig& cfg);

/// Header row "x, m1_mean, m1_sem, ..." then one row per record.
void emit_csv(const CurveResult& curve, const std::filesystem::path& path);
std::string format_csv(const CurveResult& curve);
/// Writes one CSV per curve, an optional summary CSV and a JSON manifest.
/// Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg,
                                                 const EnsembleResult& result,
                                                 const std::filesystem::path& dir);
std::string manifest_json(const ExperimentConfig& cfg, const EnsembleResult& result);

/// Shortest round-trip decimal.
std::string format_double(double v);

double glow_tail_average(const std::vector<double>& episode_lengths, std::size_t window = 500);

/// Trains the first curve of a grid preset with one agent and returns its
/// policy table.
Eigen::MatrixXd train_grid_policy(const ExperimentConfig& cfg);
std::string format_policy_csv(const Eigen::MatrixXd& table, const GridWorld& gw);

}  // namespace qmem
