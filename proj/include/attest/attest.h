/*
 * C interface to the attest attitude estimation library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every function returns an attest_status; on failure a human readable
 * description is available from attest_last_error() (thread-local, valid
 * until the next failing call on the same thread).
 *
 * Quaternions are stored in (w, x, y, z) order: scalar part FIRST.
 */
#ifndef ATTEST_ATTEST_H
#define ATTEST_ATTEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ATTEST_BUILDING_LIBRARY)
#    define ATTEST_API __declspec(dllexport)
#  else
#    define ATTEST_API __declspec(dllimport)
#  endif
#else
#  define ATTEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum attest_status {
  ATTEST_OK = 0,
  ATTEST_ERR_NULL_ARGUMENT = 1,
  ATTEST_ERR_INVALID_ARGUMENT = 2,
  ATTEST_ERR_INVALID_CONFIG = 3,
  ATTEST_ERR_SINGULAR = 4,
  ATTEST_ERR_DEGENERATE = 5,
  ATTEST_ERR_OUT_OF_RANGE = 6,
  ATTEST_ERR_INTERNAL = 7
} attest_status;

typedef enum attest_method {
  ATTEST_METHOD_MAGNETOMETER = 0,
  ATTEST_METHOD_ZYX_YAW = 1,
  ATTEST_METHOD_FUSED_YAW = 2
} attest_method;

typedef enum attest_path {
  ATTEST_PATH_PRIMARY = 0,
  ATTEST_PATH_FALLBACK_FUSED = 1,
  ATTEST_PATH_FALLBACK_ZYX = 2,
  ATTEST_PATH_FALLBACK_ZXY = 3
} attest_path;

typedef enum attest_mag_mode {
  ATTEST_MAG_FULL3D = 0,
  ATTEST_MAG_XY_ONLY = 1,
  ATTEST_MAG_HEADING_ONLY = 2,
  ATTEST_MAG_ABSENT = 3
} attest_mag_mode;

typedef struct attest_vec3 {
  double x, y, z;
} attest_vec3;

typedef struct attest_quat {
  double w, x, y, z;
} attest_quat;

typedef struct attest_frame {
  double t;
  attest_vec3 gyro; /* rad/s */
  int gyro_valid;
  attest_vec3 acc; /* m/s^2, (0, 0, -g) when upright at rest */
  int acc_valid;
  int acc_z_valid; /* 0: az reconstructed from ax, ay and gravity */
  attest_vec3 mag;
  double heading; /* rad, ATTEST_MAG_HEADING_ONLY */
  attest_mag_mode mag_mode;
} attest_frame;

typedef struct attest_config {
  double kp, ki;             /* nominal PI gains */
  double kp_quick, ki_quick; /* quick learning PI gains */
  double quick_learn_time;   /* s, > 0 */
  int quick_learn_on_start;
  double nominal_dt; /* s, > 0 */
  double dt_low, dt_high; /* coercion multipliers of nominal_dt */
  attest_method method;
  attest_method mag_fallback; /* ZYX or fused yaw */
  double bias_limit; /* rad/s per component, <= 0 disables */
  attest_vec3 acc_bias;
  attest_vec3 mag_bias;
  double gravity;
  attest_vec3 mag_reference; /* global frame, z unused */
} attest_config;

typedef struct attest_state {
  attest_quat attitude;
  attest_vec3 bias;
  double lambda;
  int quick_active;
  double kp, ki; /* gains used by the last update */
  attest_vec3 omega_e;
  attest_path path;
  int correction_applied;
  int mag_used;
  double last_dt;
} attest_state;

typedef struct attest_estimator attest_estimator;
typedef struct attest_scenario attest_scenario;

typedef struct attest_scenario_params {
  const char* name; /* static, static-random, step, const-rate, sinusoid, wobble, tumble, fig1, fig2 */
  uint64_t seed;
  double duration; /* s, <= 0 selects the scenario default */
  double rate;     /* Hz */
  int ideal;       /* nonzero: no bias, noise or faults */
} attest_scenario_params;

typedef struct attest_bench_result {
  size_t iterations;
  double total_s;
  double mean_ns;
  double updates_per_s;
} attest_bench_result;

ATTEST_API const char* attest_version(void);
ATTEST_API const char* attest_last_error(void);
ATTEST_API const char* attest_method_name(attest_method method);
ATTEST_API const char* attest_path_name(attest_path path);

/* Estimator lifecycle. */
ATTEST_API attest_status attest_config_default(attest_config* config);
ATTEST_API attest_status attest_estimator_create(const attest_config* config, attest_estimator** out);
ATTEST_API void attest_estimator_destroy(attest_estimator* est);
ATTEST_API attest_status attest_estimator_reset(attest_estimator* est, int reset_bias);
ATTEST_API attest_status attest_estimator_update(attest_estimator* est, double dt, const attest_frame* frame);
ATTEST_API attest_status attest_estimator_trigger_quick_learning(attest_estimator* est);
ATTEST_API attest_status attest_estimator_get_state(const attest_estimator* est, attest_state* out);
ATTEST_API attest_status attest_estimator_set_attitude(attest_estimator* est, attest_quat q);
ATTEST_API attest_status attest_estimator_set_bias(attest_estimator* est, attest_vec3 bias);
/* Estimate with fused yaw removed; *singular (optional) is set when the estimate is upside down (q passed through). */
ATTEST_API attest_status attest_estimator_stable_output(const attest_estimator* est, attest_quat* out, int* singular);

/* Rotation utilities. */
ATTEST_API attest_status attest_fused_yaw(attest_quat q, double* out);
ATTEST_API attest_status attest_zyx_yaw(attest_quat q, double* out);
ATTEST_API attest_status attest_zyx_pitch_roll(attest_quat q, double* pitch, double* roll);
ATTEST_API attest_status attest_remove_fused_yaw(attest_quat q, attest_quat* out);
ATTEST_API attest_status attest_attitude_error_angle(attest_quat a, attest_quat b, double* out);
ATTEST_API attest_status attest_tilt_error_angle(attest_quat truth, attest_quat estimate, double* out);

/* Simulation scenarios. */
ATTEST_API attest_status attest_scenario_params_default(attest_scenario_params* params);
ATTEST_API attest_status attest_scenario_create(const attest_scenario_params* params, attest_scenario** out);
ATTEST_API void attest_scenario_destroy(attest_scenario* sc);
ATTEST_API size_t attest_scenario_size(const attest_scenario* sc);
ATTEST_API attest_status attest_scenario_frame(const attest_scenario* sc, size_t index, attest_frame* out);
ATTEST_API attest_status attest_scenario_truth(const attest_scenario* sc, size_t index, attest_quat* out);
ATTEST_API attest_status attest_scenario_mag_reference(const attest_scenario* sc, attest_vec3* out);

/* Benchmark (at least one iteration). */
ATTEST_API attest_status attest_bench(attest_method method, size_t iterations, attest_bench_result* out);

#ifdef __cplusplus
}
#endif

#endif /* ATTEST_ATTEST_H */
