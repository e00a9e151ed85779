/* C interface to the qmem simulation library. All functions are safe to call
 * from any thread; a handle must not be used by two threads at once. Error
 * messages are kept per thread. */
#ifndef QMEM_H
#define QMEM_H

#include <stddef.h>
#include <stdint.h>

#if defined(QMEM_BUILDING_LIBRARY)
#define QMEM_API __attribute__((visibility("default")))
#else
#define QMEM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qm_status {
  QM_OK = 0,
  QM_ERR_CONFIG = 1,
  QM_ERR_IO = 2,
  QM_ERR_INVALID_ARGUMENT = 3,
  QM_ERR_INTERNAL = 4
} qm_status;

typedef struct qm_experiment qm_experiment;

QMEM_API const char* qm_version(void);
/* Message for the last failing call on this thread, "" if none. */
QMEM_API const char* qm_last_error(void);

QMEM_API size_t qm_preset_count(void);
/* NULL when index is out of range. */
QMEM_API const char* qm_preset_name(size_t index);
QMEM_API const char* qm_preset_description(size_t index);

QMEM_API qm_status qm_experiment_create(const char* preset, qm_experiment** out);
/* The file must name its preset under [experiment]. */
QMEM_API qm_status qm_experiment_from_config(const char* path, qm_experiment** out);
QMEM_API qm_status qm_experiment_apply_config(qm_experiment* exp, const char* path);
QMEM_API void qm_experiment_destroy(qm_experiment* exp);

QMEM_API qm_status qm_experiment_set_seed(qm_experiment* exp, uint64_t seed);
QMEM_API qm_status qm_experiment_set_agents(qm_experiment* exp, int32_t agents);
QMEM_API qm_status qm_experiment_set_budget(qm_experiment* exp, int64_t budget);
/* 0 uses every hardware thread. Results do not depend on this value. */
QMEM_API qm_status qm_experiment_set_workers(qm_experiment* exp, int32_t workers);

QMEM_API qm_status qm_experiment_run(qm_experiment* exp);
/* Writes curve CSVs and the manifest of the last run into out_dir. */
QMEM_API qm_status qm_experiment_write(const qm_experiment* exp, const char* out_dir);

QMEM_API qm_status qm_experiment_curve_count(const qm_experiment* exp, size_t* out);
QMEM_API qm_status qm_experiment_curve_info(const qm_experiment* exp, size_t curve,
                                            const char** label, size_t* records,
                                            size_t* metrics);
QMEM_API qm_status qm_experiment_metric_name(const qm_experiment* exp, size_t curve,
                                             size_t metric, const char** name);
/* mean and sem must each hold `metrics` doubles. */
QMEM_API qm_status qm_experiment_record(const qm_experiment* exp, size_t curve, size_t record,
                                        int64_t* x, double* mean, double* sem);
QMEM_API qm_status qm_experiment_cycles(const qm_experiment* exp, uint64_t* external,
                                        uint64_t* internal);

/* Trains a grid preset with one agent and writes its 8 x 4 policy table as
 * CSV. budget <= 0 keeps the preset's episode count. */
QMEM_API qm_status qm_policy_dump(const char* preset, uint64_t seed, int64_t budget,
                                  const char* out_file);

typedef void (*qm_check_callback)(const char* name, int passed, const char* detail, void* user);
/* Runs the invariant suite; failures receives the number of failed checks. */
QMEM_API qm_status qm_verify(uint64_t seed, qm_check_callback callback, void* user,
                             int32_t* failures);

#ifdef __cplusplus
}
#endif

#endif /* QMEM_H */
