#include "qmem/qmem.h"

#include <fstream>
#include <optional>
#include <string>

#include "qmem/runner.hpp"
#include "qmem/verify.hpp"

struct qm_experiment {
  qmem::ExperimentConfig config;
  std::optional<qmem::EnsembleResult> result;
};

namespace {

thread_local std::string last_error;

template <class F>
qm_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return QM_OK;
  } catch (const qmem::ConfigError& e) {
    last_error = e.what();
    return QM_ERR_CONFIG;
  } catch (const qmem::IoError& e) {
    last_error = e.what();
    return QM_ERR_IO;
  } catch (const qmem::InvalidArgument& e) {
    last_error = e.what();
    return QM_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return QM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw qmem::InvalidArgument(what);
}

const std::vector<qmem::ExperimentConfig>& catalog() {
  static const auto c = qmem::preset_catalog();
  return c;
}

const qmem::EnsembleResult& results(const qm_experiment* exp) {
  require(exp != nullptr, "null experiment handle");
  if (!exp->result) throw qmem::InvalidArgument("experiment has not been run");
  return *exp->result;
}

const qmem::CurveResult& curve_at(const qm_experiment* exp, size_t curve) {
  const auto& r = results(exp);
  require(curve < r.curves.size(), "curve index out of range");
  return r.curves[curve];
}

}  // namespace

extern "C" {

const char* qm_version(void) { return "0.1.0"; }

const char* qm_last_error(void) { return last_error.c_str(); }

size_t qm_preset_count(void) { return catalog().size(); }

const char* qm_preset_name(size_t index) {
  return index < catalog().size() ? catalog()[index].name.c_str() : nullptr;
}

const char* qm_preset_description(size_t index) {
  return index < catalog().size() ? catalog()[index].description.c_str() : nullptr;
}

qm_status qm_experiment_create(const char* preset, qm_experiment** out) {
  return guarded([&] {
    require(preset != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto* exp = new qm_experiment{qmem::preset(preset), std::nullopt};
    *out = exp;
  });
}

qm_status qm_experiment_from_config(const char* path, qm_experiment** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto* exp = new qm_experiment{qmem::load_config_file(path), std::nullopt};
    *out = exp;
  });
}

qm_status qm_experiment_apply_config(qm_experiment* exp, const char* path) {
  return guarded([&] {
    require(exp != nullptr && path != nullptr, "null argument");
    qmem::ExperimentConfig copy = exp->config;
    qmem::apply_config_file(copy, path);
    exp->config = std::move(copy);
  });
}

void qm_experiment_destroy(qm_experiment* exp) { delete exp; }

qm_status qm_experiment_set_seed(qm_experiment* exp, uint64_t seed) {
  return guarded([&] {
    require(exp != nullptr, "null experiment handle");
    exp->config.seed = seed;
  });
}

qm_status qm_experiment_set_agents(qm_experiment* exp, int32_t agents) {
  return guarded([&] {
    require(exp != nullptr, "null experiment handle");
    if (agents < 1) throw qmem::ConfigError("agents must be positive");
    exp->config.agents = agents;
  });
}

qm_status qm_experiment_set_budget(qm_experiment* exp, int64_t budget) {
  return guarded([&] {
    require(exp != nullptr, "null experiment handle");
    if (budget < 1) throw qmem::ConfigError("budget must be positive");
    exp->config.budget = static_cast<long>(budget);
  });
}

qm_status qm_experiment_set_workers(qm_experiment* exp, int32_t workers) {
  return guarded([&] {
    require(exp != nullptr, "null experiment handle");
    if (workers < 0) throw qmem::ConfigError("workers must be non-negative");
    exp->config.workers = workers;
  });
}

qm_status qm_experiment_run(qm_experiment* exp) {
  return guarded([&] {
    require(exp != nullptr, "null experiment handle");
    exp->result = qmem::run_ensemble(exp->config);
  });
}

qm_status qm_experiment_write(const qm_experiment* exp, const char* out_dir) {
  return guarded([&] {
    require(out_dir != nullptr, "null output directory");
    const auto& r = results(exp);
    qmem::write_outputs(exp->config, r, out_dir);
  });
}

qm_status qm_experiment_curve_count(const qm_experiment* exp, size_t* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = results(exp).curves.size();
  });
}

qm_status qm_experiment_curve_info(const qm_experiment* exp, size_t curve, const char** label,
                                   size_t* records, size_t* metrics) {
  return guarded([&] {
    const auto& c = curve_at(exp, curve);
    if (label) *label = c.label.c_str();
    if (records) *records = c.records.size();
    if (metrics) *metrics = c.metrics.size();
  });
}

qm_status qm_experiment_metric_name(const qm_experiment* exp, size_t curve, size_t metric,
                                    const char** name) {
  return guarded([&] {
    const auto& c = curve_at(exp, curve);
    require(metric < c.metrics.size() && name != nullptr, "metric index out of range");
    *name = c.metrics[metric].c_str();
  });
}

qm_status qm_experiment_record(const qm_experiment* exp, size_t curve, size_t record, int64_t* x,
                               double* mean, double* sem) {
  return guarded([&] {
    const auto& c = curve_at(exp, curve);
    require(record < c.records.size(), "record index out of range");
    const auto& r = c.records[record];
    if (x) *x = r.x;
    for (size_t m = 0; m < r.mean.size(); ++m) {
      if (mean) mean[m] = r.mean[m];
      if (sem) sem[m] = r.sem[m];
    }
  });
}

qm_status qm_experiment_cycles(const qm_experiment* exp, uint64_t* external, uint64_t* internal) {
  return guarded([&] {
    const auto& r = results(exp);
    if (external) *external = r.ledger.external;
    if (internal) *internal = r.ledger.internal;
  });
}

qm_status qm_policy_dump(const char* preset, uint64_t seed, int64_t budget, const char* out_file) {
  return guarded([&] {
    require(preset != nullptr && out_file != nullptr, "null argument");
    auto cfg = qmem::preset(preset);
    cfg.seed = seed;
    cfg.agents = 1;
    if (budget > 0) cfg.budget = static_cast<long>(budget);
    const auto table = qmem::train_grid_policy(cfg);
    const auto text = qmem::format_policy_csv(table, cfg.curves.front().grid);
    std::ofstream f(out_file, std::ios::binary | std::ios::trunc);
    if (!f) throw qmem::IoError(std::string("cannot open '") + out_file + "' for writing");
    f << text;
    f.close();
    if (!f) throw qmem::IoError(std::string("failed writing '") + out_file + "'");
  });
}

qm_status qm_verify(uint64_t seed, qm_check_callback callback, void* user, int32_t* failures) {
  return guarded([&] {
    int32_t failed = 0;
    qmem::run_invariant_suite(seed, [&](const qmem::CheckResult& r) {
      failed += r.passed ? 0 : 1;
      if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    });
    if (failures) *failures = failed;
  });
}

}  // extern "C"
