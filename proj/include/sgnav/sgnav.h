/* C interface to the sgnav navigation harness. All functions returning int
 * return SGNAV_OK or an error status; the message of the most recent failure
 * on the calling thread is available from sgnav_last_error(). */
#ifndef SGNAV_SGNAV_H
#define SGNAV_SGNAV_H

#include <stddef.h>
#include <stdint.h>

#if defined(SGNAV_BUILDING)
#define SGNAV_API __attribute__((visibility("default")))
#else
#define SGNAV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum sgnav_status {
  SGNAV_OK = 0,
  SGNAV_ERR_INVALID_ARGUMENT = 1,
  SGNAV_ERR_CONFIG = 2,
  SGNAV_ERR_NUMERIC = 3,  /* NaN or Inf during optimization */
  SGNAV_ERR_IO = 4,
  SGNAV_ERR_GEOMETRY = 5, /* empty grid, unreachable target, robot placement */
  SGNAV_ERR_DATA = 6,     /* bad labels, vectors, graphs or eval buckets */
  SGNAV_ERR_INTERNAL = 7
};

enum sgnav_policy {
  SGNAV_POLICY_CHECKPOINT = 0, /* deterministic actions of a trained agent */
  SGNAV_POLICY_EXPERT = 1,     /* Dijkstra + Pure Pursuit control module */
  SGNAV_POLICY_RANDOM = 2
};

typedef struct sgnav_config sgnav_config;
typedef struct sgnav_report sgnav_report;

typedef struct sgnav_train_summary {
  long env_steps;
  long episodes;
  int level_index;
  double level_R;
  double level_phi;
} sgnav_train_summary;

typedef struct sgnav_eval_bucket {
  double distance;
  long episodes;
  long successes;
  double success_rate;
  double mean_length;
} sgnav_eval_bucket;

SGNAV_API const char* sgnav_version(void);
SGNAV_API const char* sgnav_last_error(void);
/* Name of the failing condition, e.g. "InitExhausted". */
SGNAV_API const char* sgnav_last_error_kind(void);
SGNAV_API void sgnav_string_free(char* s);

SGNAV_API int sgnav_config_new(sgnav_config** out);
SGNAV_API int sgnav_config_load(const char* path, sgnav_config** out);
SGNAV_API int sgnav_config_parse(const char* json, sgnav_config** out);
/* Sets a dotted key such as "sac.batch_size". `value` is read as a JSON
 * literal, or as a plain string for string-valued keys. Unknown keys and
 * invalid values fail with SGNAV_ERR_CONFIG and leave the config unchanged. */
SGNAV_API int sgnav_config_set(sgnav_config* config, const char* key, const char* value);
/* Caller frees *out with sgnav_string_free. */
SGNAV_API int sgnav_config_to_json(const sgnav_config* config, char** out);
SGNAV_API int sgnav_config_save(const sgnav_config* config, const char* path);
SGNAV_API void sgnav_config_free(sgnav_config* config);

/* metrics_dir and checkpoint_path may be NULL. */
SGNAV_API int sgnav_train(const sgnav_config* config, const char* metrics_dir,
                          const char* checkpoint_path, sgnav_train_summary* out);

/* For SGNAV_POLICY_CHECKPOINT the agent comes from `checkpoint`; the run
 * config is `config` when non-NULL, else the one stored in the checkpoint.
 * Other policies require `config`. */
SGNAV_API int sgnav_eval(const sgnav_config* config, const char* checkpoint, int policy,
                         const double* distances, size_t num_distances,
                         long episodes_per_bucket, uint64_t seed, sgnav_report** out);
SGNAV_API size_t sgnav_report_size(const sgnav_report* report);
SGNAV_API int sgnav_report_bucket(const sgnav_report* report, size_t index,
                                  sgnav_eval_bucket* out);
SGNAV_API int sgnav_report_write_csv(const sgnav_report* report, const char* path);
SGNAV_API void sgnav_report_free(sgnav_report* report);

/* family: "SIMPLE", "TWO_WALL" or "RANDOM_CHAIRS". */
SGNAV_API int sgnav_gen_scene(const char* family, uint64_t seed, const char* path);

/* Renders SVG plots for the CSVs found in metrics_dir into out_dir. */
SGNAV_API int sgnav_plot(const char* metrics_dir, const char* out_dir);

/* Largest relative error between analytic and finite-difference gradients
 * over `batches` random batches for a fresh agent of `config` (NULL for
 * defaults). */
SGNAV_API int sgnav_gradcheck(const sgnav_config* config, uint64_t seed, int batches,
                              int weights_per_batch, double* max_rel_error);

#ifdef __cplusplus
}
#endif

#endif
