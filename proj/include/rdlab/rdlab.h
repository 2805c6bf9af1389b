/* C interface to rdlab. Objects are opaque handles; every call returns a
 * status code and stores a message retrievable with rdlab_last_error() on
 * the calling thread. Strings returned through char** are owned by the
 * caller and released with rdlab_string_free(). */
#ifndef RDLAB_H
#define RDLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(RDLAB_BUILDING_DLL)
#define RDLAB_API __attribute__((visibility("default")))
#else
#define RDLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdlab_status {
  RDLAB_OK = 0,
  RDLAB_ERR_INVALID_ARGUMENT = 1,
  RDLAB_ERR_EMPTY_RESULT = 2,
  RDLAB_ERR_NUMERICAL_FAILURE = 3,
  RDLAB_ERR_INFEASIBLE = 4,
  RDLAB_ERR_NO_SIGN_CHANGE = 5,
  RDLAB_ERR_NO_BAND = 6,
  RDLAB_ERR_POLE_AT_MODE = 7,
  RDLAB_ERR_DEGENERATE_DOMAIN = 8,
  RDLAB_ERR_DISCONNECTED_DOMAIN = 9,
  RDLAB_ERR_SHAPE_MISMATCH = 10,
  RDLAB_ERR_BLOW_UP = 11,
  RDLAB_ERR_EMPTY_REGION = 12,
  RDLAB_ERR_REGION_NOT_RECTANGULAR = 13,
  RDLAB_ERR_NEVER_ONSET = 14,
  RDLAB_ERR_IO = 15,
  RDLAB_ERR_CONFIG = 16,
  RDLAB_ERR_INTERNAL = 99
} rdlab_status;

typedef enum rdlab_region {
  RDLAB_REGION_D1 = 0,
  RDLAB_REGION_D2 = 1,
  RDLAB_REGION_CORRIDOR = 2,
  RDLAB_REGION_RIGHT_PATCH = 3,
  RDLAB_REGION_ALL = 4
} rdlab_region;

typedef struct rdlab_config rdlab_config;
typedef struct rdlab_sim rdlab_sim;

RDLAB_API const char* rdlab_version(void);
RDLAB_API const char* rdlab_status_name(rdlab_status status);
/* Message of the last failing call on this thread ("" when none). */
RDLAB_API const char* rdlab_last_error(void);
/* Process exit code for a status: 0 ok, 2 infeasible analysis, 3 blow-up
 * or numerical failure, 4 I/O, config or argument errors. */
RDLAB_API int rdlab_exit_code(rdlab_status status);
RDLAB_API void rdlab_string_free(char* s);

/* Configuration: flat "key = value" text. */
RDLAB_API rdlab_status rdlab_config_new(rdlab_config** out);
RDLAB_API rdlab_status rdlab_config_parse(const char* text, rdlab_config** out);
RDLAB_API rdlab_status rdlab_config_load(const char* path, rdlab_config** out);
RDLAB_API rdlab_status rdlab_config_clone(const rdlab_config* cfg, rdlab_config** out);
RDLAB_API void rdlab_config_free(rdlab_config* cfg);
RDLAB_API rdlab_status rdlab_config_set(rdlab_config* cfg, const char* key, const char* value);
RDLAB_API rdlab_status rdlab_config_get(const rdlab_config* cfg, const char* key, char** value);
RDLAB_API rdlab_status rdlab_config_emit(const rdlab_config* cfg, char** text);

/* Point analyses at the configured parameters. */
RDLAB_API rdlab_status rdlab_equilibrium(const rdlab_config* cfg, double* u_star, double* v_star);
RDLAB_API rdlab_status rdlab_hopf_threshold_s(const rdlab_config* cfg, double* s_h);
RDLAB_API rdlab_status rdlab_hopf_threshold_a(const rdlab_config* cfg, double a_lo, double a_hi, double* a_h);
/* First Lyapunov number with s moved to its Hopf threshold. */
RDLAB_API rdlab_status rdlab_first_lyapunov(const rdlab_config* cfg, double* sigma);
RDLAB_API rdlab_status rdlab_unstable_band(const rdlab_config* cfg, double* k1, double* k2);
RDLAB_API rdlab_status rdlab_turing_boundary_d2(const rdlab_config* cfg, double* d2t);

/* Commands. Text results are returned through `out`. */
RDLAB_API rdlab_status rdlab_cmd_analyze(const rdlab_config* cfg, char** out);
RDLAB_API rdlab_status rdlab_cmd_dispersion(const rdlab_config* cfg, char** out);
/* Writes regime_map.csv and turing_boundary.csv under output.dir. */
RDLAB_API rdlab_status rdlab_cmd_map(const rdlab_config* cfg, char** out);
RDLAB_API rdlab_status rdlab_cmd_simulate(const rdlab_config* cfg, char** out);
/* fill is "zero" or "homogeneous". */
RDLAB_API rdlab_status rdlab_cmd_resume(const rdlab_config* cfg, const char* snapshot, const char* fill, char** out);
RDLAB_API rdlab_status rdlab_cmd_classify(const char* const* snapshots, size_t count, char** out);
RDLAB_API rdlab_status rdlab_cmd_series(const char* const* snapshots, size_t count, char** out);

/* Stepwise simulation on the configured geometry and initial condition. */
RDLAB_API rdlab_status rdlab_sim_new(const rdlab_config* cfg, rdlab_sim** out);
RDLAB_API void rdlab_sim_free(rdlab_sim* sim);
RDLAB_API rdlab_status rdlab_sim_grid(const rdlab_sim* sim, int* nx, int* ny, double* h);
RDLAB_API rdlab_status rdlab_sim_dt(const rdlab_sim* sim, double* dt);
RDLAB_API rdlab_status rdlab_sim_time(const rdlab_sim* sim, double* t);
RDLAB_API rdlab_status rdlab_sim_advance(rdlab_sim* sim, uint64_t steps);
/* Copies the u and v planes (nx*ny each, NaN outside the mask). */
RDLAB_API rdlab_status rdlab_sim_fields(const rdlab_sim* sim, double* u, double* v, size_t count);
RDLAB_API rdlab_status rdlab_sim_means(const rdlab_sim* sim, rdlab_region region, double* mean_u, double* mean_v);

#ifdef __cplusplus
}
#endif

#endif
