/* SPDX-License-Identifier: Apache-2.0 */
#ifndef RISSAT_RISSAT_H
#define RISSAT_RISSAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RISSAT_BUILDING_LIBRARY)
#    define RISSAT_API __declspec(dllexport)
#  else
#    define RISSAT_API __declspec(dllimport)
#  endif
#else
#  define RISSAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rissat_status {
  RISSAT_OK = 0,
  RISSAT_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer, buffer too small */
  RISSAT_ERR_PARSE = 2,            /* malformed TOML */
  RISSAT_ERR_VALIDATION = 3,       /* well-formed but rejected configuration */
  RISSAT_ERR_DOMAIN = 4,           /* value outside its physical range */
  RISSAT_ERR_GEOMETRY = 5,         /* degenerate node placement */
  RISSAT_ERR_DIMENSION = 6,        /* mismatched vector lengths */
  RISSAT_ERR_EXPERIMENT = 7,       /* one or more result tables failed */
  RISSAT_ERR_IO = 8,
  RISSAT_ERR_INTERNAL = 9
} rissat_status;

/* Parsed, validated experiment configuration. */
typedef struct rissat_config rissat_config;

/* Message for the last failing call on this thread; never NULL. */
RISSAT_API const char* rissat_last_error(void);
RISSAT_API const char* rissat_version(void);

RISSAT_API rissat_status rissat_config_load(const char* path, rissat_config** out);
RISSAT_API rissat_status rissat_config_parse(const char* toml_text, rissat_config** out);
RISSAT_API void rissat_config_free(rissat_config* cfg);

/* Overrides the configured master seed. */
RISSAT_API rissat_status rissat_config_set_seed(rissat_config* cfg, uint64_t seed);
/* 1 and the seed when one is set, else 0. */
RISSAT_API int rissat_config_get_seed(const rissat_config* cfg, uint64_t* seed);

/*
 * String getters follow one convention: the full length (without the
 * terminator) goes to *needed, and up to cap-1 bytes plus a terminator are
 * copied when buf is non-NULL. RISSAT_ERR_INVALID_ARGUMENT if cap is short.
 */
RISSAT_API rissat_status rissat_config_hash(const rissat_config* cfg, char* buf, size_t cap, size_t* needed);
RISSAT_API rissat_status rissat_config_serialize(const rissat_config* cfg, char* buf, size_t cap, size_t* needed);
RISSAT_API rissat_status rissat_config_experiment(const rissat_config* cfg, char* buf, size_t cap, size_t* needed);
RISSAT_API rissat_status rissat_describe_schema(const char* table, char* buf, size_t cap, size_t* needed);

/* Newline-separated list of table names with a schema. */
RISSAT_API rissat_status rissat_schema_names(char* buf, size_t cap, size_t* needed);

/*
 * Runs "baseline", "ie", "nie" or "figures-all" and writes CSVs plus
 * summary.json to out_dir. Partial failures return RISSAT_ERR_EXPERIMENT
 * after the remaining tables are written.
 */
RISSAT_API rissat_status rissat_run_experiment(const rissat_config* cfg, const char* experiment,
                                               const char* out_dir);

/* Free-space path loss in dB plus an excess term. */
RISSAT_API rissat_status rissat_path_loss_db(double carrier_hz, double distance_m, double excess_db, double* out);

typedef struct rissat_ie_summary {
  double eta_star;
  double eta_baseline;
  double eta_cophased_all_active;
  double received_power_w;
  double consumption_w;
  size_t k_star; /* 1-based */
  size_t active_elements;
} rissat_ie_summary;

RISSAT_API rissat_status rissat_ie_optimize(const rissat_config* cfg, rissat_ie_summary* out);

typedef struct rissat_nie_summary {
  double initial_expected_eta;
  double final_expected_eta;
  size_t iterations;
  int converged;
} rissat_nie_summary;

/* Requires a seed on the configuration. */
RISSAT_API rissat_status rissat_nie_optimize(const rissat_config* cfg, rissat_nie_summary* out);

#ifdef __cplusplus
}
#endif

#endif
