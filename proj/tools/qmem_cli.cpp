// Command-line front end over the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "qmem/qmem.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitChecksFailed = 3;

int exit_code(qm_status s) {
  switch (s) {
    case QM_OK: return 0;
    case QM_ERR_IO: return kExitIo;
    case QM_ERR_CONFIG:
    case QM_ERR_INVALID_ARGUMENT: return kExitConfig;
    case QM_ERR_INTERNAL: break;
  }
  return kExitConfig;
}

int report(qm_status s) {
  if (s != QM_OK) std::cerr << "error: " << qm_last_error() << "\n";
  return exit_code(s);
}

struct RunOptions {
  std::string preset;
  std::string config;
  std::string out = "out";
  uint64_t seed = 1;
  int32_t agents = 0;
  int64_t budget = 0;
  int32_t workers = 0;
  bool seed_set = false;
};

int run(const RunOptions& o) {
  qm_experiment* exp = nullptr;
  qm_status s = QM_OK;
  if (!o.preset.empty()) {
    s = qm_experiment_create(o.preset.c_str(), &exp);
    if (s == QM_OK && !o.config.empty()) s = qm_experiment_apply_config(exp, o.config.c_str());
  } else if (!o.config.empty()) {
    s = qm_experiment_from_config(o.config.c_str(), &exp);
  } else {
    std::cerr << "error: run needs --preset or --config\n";
    return kExitConfig;
  }
  if (s == QM_OK && o.seed_set) s = qm_experiment_set_seed(exp, o.seed);
  if (s == QM_OK && o.agents != 0) s = qm_experiment_set_agents(exp, o.agents);
  if (s == QM_OK && o.budget != 0) s = qm_experiment_set_budget(exp, o.budget);
  if (s == QM_OK) s = qm_experiment_set_workers(exp, o.workers);
  if (s == QM_OK) s = qm_experiment_run(exp);
  if (s == QM_OK) s = qm_experiment_write(exp, o.out.c_str());
  if (s == QM_OK) {
    size_t curves = 0;
    uint64_t external = 0, internal = 0;
    qm_experiment_curve_count(exp, &curves);
    qm_experiment_cycles(exp, &external, &internal);
    for (size_t c = 0; c < curves; ++c) {
      const char* label = nullptr;
      size_t records = 0, metrics = 0;
      qm_experiment_curve_info(exp, c, &label, &records, &metrics);
      std::cout << "curve " << label << ": " << records << " records\n";
    }
    std::cout << "cycles: external " << external << ", internal " << internal << "\n";
    std::cout << "output: " << o.out << "\n";
  }
  qm_experiment_destroy(exp);
  return report(s);
}

void print_check(const char* name, int passed, const char* detail, void*) {
  std::cout << (passed ? "PASS " : "FAIL ") << name << "  " << detail << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation of a glow-trained agent with a unitary memory"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "run a preset and write CSV curves");
  run_cmd->add_option("--preset", ro.preset, "preset name (see list-presets)");
  run_cmd->add_option("--config", ro.config, "INI overrides; may name the preset itself");
  run_cmd->add_option("--seed", ro.seed, "master seed")->each([&](const std::string&) { ro.seed_set = true; });
  run_cmd->add_option("--agents", ro.agents, "ensemble size")->check(CLI::PositiveNumber);
  run_cmd->add_option("--budget", ro.budget, "cycles (invasion) or episodes (grid)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--workers", ro.workers, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--out", ro.out, "output directory");

  app.add_subcommand("list-presets", "list preset names");

  std::string dump_preset = "fig10", dump_out;
  uint64_t dump_seed = 1;
  int64_t dump_budget = 0;
  auto* dump_cmd = app.add_subcommand("policy-dump", "train a grid preset and write its policy table");
  dump_cmd->add_option("--preset", dump_preset, "grid preset")->required();
  dump_cmd->add_option("--out", dump_out, "CSV file")->required();
  dump_cmd->add_option("--seed", dump_seed, "master seed");
  dump_cmd->add_option("--budget", dump_budget, "episodes")->check(CLI::PositiveNumber);

  uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  verify_cmd->add_option("--seed", verify_seed, "seed for the randomised checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) return run(ro);
  if (app.got_subcommand("list-presets")) {
    for (size_t i = 0; i < qm_preset_count(); ++i)
      std::cout << qm_preset_name(i) << "\t" << qm_preset_description(i) << "\n";
    return 0;
  }
  if (*dump_cmd) {
    const auto s = qm_policy_dump(dump_preset.c_str(), dump_seed, dump_budget, dump_out.c_str());
    if (s == QM_OK) std::cout << "policy written to " << dump_out << "\n";
    return report(s);
  }
  if (*verify_cmd) {
    int32_t failures = 0;
    const auto s = qm_verify(verify_seed, print_check, nullptr, &failures);
    if (s != QM_OK) return report(s);
    std::cout << failures << " check(s) failed\n";
    return failures == 0 ? 0 : kExitChecksFailed;
  }
  return kExitConfig;
}
