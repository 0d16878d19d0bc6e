// extern "C" wrapper around the C++ core. No exception crosses this boundary.
#include "attest/attest.h"

#include <exception>
#include <new>
#include <string>

#include "attest/bench.hpp"
#include "attest/error.hpp"
#include "attest/estimator.hpp"
#include "attest/sim.hpp"

struct attest_estimator {
  attest::AttitudeEstimator impl;
};

struct attest_scenario {
  attest::sim::Scenario impl;
};

namespace {

thread_local std::string g_last_error;

attest_status fail(attest_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename F>
attest_status guarded(F&& body) noexcept {
  try {
    return body();
  } catch (const attest::InvalidConfigError& e) {
    return fail(ATTEST_ERR_INVALID_CONFIG, e.what());
  } catch (const attest::InvalidArgumentError& e) {
    return fail(ATTEST_ERR_INVALID_ARGUMENT, e.what());
  } catch (const attest::SingularityError& e) {
    return fail(ATTEST_ERR_SINGULAR, e.what());
  } catch (const attest::DegenerateInputError& e) {
    return fail(ATTEST_ERR_DEGENERATE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ATTEST_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ATTEST_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ATTEST_ERR_INTERNAL, "unknown error");
  }
}

#define ATTEST_REQUIRE(ptr) \
  if (!(ptr)) return fail(ATTEST_ERR_NULL_ARGUMENT, "null argument: " #ptr)

attest::Vec3 to_cpp(const attest_vec3& v) { return {v.x, v.y, v.z}; }
attest_vec3 to_c(const attest::Vec3& v) { return {v.x, v.y, v.z}; }
attest::Quat to_cpp(const attest_quat& q) { return {q.w, q.x, q.y, q.z}; }
attest_quat to_c(const attest::Quat& q) { return {q.w, q.x, q.y, q.z}; }

bool to_cpp(attest_method m, attest::ResolutionMethod& out) {
  switch (m) {
    case ATTEST_METHOD_MAGNETOMETER:
      out = attest::ResolutionMethod::kMagnetometer;
      return true;
    case ATTEST_METHOD_ZYX_YAW:
      out = attest::ResolutionMethod::kZyxYaw;
      return true;
    case ATTEST_METHOD_FUSED_YAW:
      out = attest::ResolutionMethod::kFusedYaw;
      return true;
  }
  return false;
}

attest_method to_c(attest::ResolutionMethod m) {
  switch (m) {
    case attest::ResolutionMethod::kMagnetometer:
      return ATTEST_METHOD_MAGNETOMETER;
    case attest::ResolutionMethod::kZyxYaw:
      return ATTEST_METHOD_ZYX_YAW;
    case attest::ResolutionMethod::kFusedYaw:
      break;
  }
  return ATTEST_METHOD_FUSED_YAW;
}

attest_path to_c(attest::ResolutionPath p) { return static_cast<attest_path>(static_cast<int>(p)); }

bool to_cpp(const attest_frame& in, attest::SensorFrame& out) {
  out.t = in.t;
  out.gyro = to_cpp(in.gyro);
  out.gyro_valid = in.gyro_valid != 0;
  out.acc = to_cpp(in.acc);
  out.acc_valid = in.acc_valid != 0;
  out.acc_z_valid = in.acc_z_valid != 0;
  out.mag = to_cpp(in.mag);
  out.heading = in.heading;
  switch (in.mag_mode) {
    case ATTEST_MAG_FULL3D:
      out.mag_mode = attest::MagMode::kFull3d;
      return true;
    case ATTEST_MAG_XY_ONLY:
      out.mag_mode = attest::MagMode::kXyOnly;
      return true;
    case ATTEST_MAG_HEADING_ONLY:
      out.mag_mode = attest::MagMode::kHeadingOnly;
      return true;
    case ATTEST_MAG_ABSENT:
      out.mag_mode = attest::MagMode::kAbsent;
      return true;
  }
  return false;
}

attest_frame to_c(const attest::SensorFrame& in) {
  attest_frame out{};
  out.t = in.t;
  out.gyro = to_c(in.gyro);
  out.gyro_valid = in.gyro_valid;
  out.acc = to_c(in.acc);
  out.acc_valid = in.acc_valid;
  out.acc_z_valid = in.acc_z_valid;
  out.mag = to_c(in.mag);
  out.heading = in.heading;
  switch (in.mag_mode) {
    case attest::MagMode::kFull3d:
      out.mag_mode = ATTEST_MAG_FULL3D;
      break;
    case attest::MagMode::kXyOnly:
      out.mag_mode = ATTEST_MAG_XY_ONLY;
      break;
    case attest::MagMode::kHeadingOnly:
      out.mag_mode = ATTEST_MAG_HEADING_ONLY;
      break;
    case attest::MagMode::kAbsent:
      out.mag_mode = ATTEST_MAG_ABSENT;
      break;
  }
  return out;
}

attest_config to_c(const attest::FilterConfig& c) {
  attest_config out{};
  out.kp = c.nominal.kp;
  out.ki = c.nominal.ki;
  out.kp_quick = c.quick.kp;
  out.ki_quick = c.quick.ki;
  out.quick_learn_time = c.quick_learn_time;
  out.quick_learn_on_start = c.quick_learn_on_start;
  out.nominal_dt = c.nominal_dt;
  out.dt_low = c.dt_low;
  out.dt_high = c.dt_high;
  out.method = to_c(c.method);
  out.mag_fallback = to_c(c.mag_fallback);
  out.bias_limit = c.bias_limit;
  out.acc_bias = to_c(c.calibration.acc_bias);
  out.mag_bias = to_c(c.calibration.mag_bias);
  out.gravity = c.calibration.gravity;
  out.mag_reference = to_c(c.calibration.mag_reference);
  return out;
}

bool to_cpp(const attest_config& in, attest::FilterConfig& c) {
  c.nominal = {in.kp, in.ki};
  c.quick = {in.kp_quick, in.ki_quick};
  c.quick_learn_time = in.quick_learn_time;
  c.quick_learn_on_start = in.quick_learn_on_start != 0;
  c.nominal_dt = in.nominal_dt;
  c.dt_low = in.dt_low;
  c.dt_high = in.dt_high;
  c.bias_limit = in.bias_limit;
  c.calibration.acc_bias = to_cpp(in.acc_bias);
  c.calibration.mag_bias = to_cpp(in.mag_bias);
  c.calibration.gravity = in.gravity;
  c.calibration.mag_reference = to_cpp(in.mag_reference);
  return to_cpp(in.method, c.method) && to_cpp(in.mag_fallback, c.mag_fallback);
}

}  // namespace

extern "C" {

const char* attest_version(void) { return "1.0.0"; }

const char* attest_last_error(void) { return g_last_error.c_str(); }

const char* attest_method_name(attest_method method) {
  attest::ResolutionMethod m;
  return to_cpp(method, m) ? attest::to_string(m) : "unknown";
}

const char* attest_path_name(attest_path path) {
  if (path < ATTEST_PATH_PRIMARY || path > ATTEST_PATH_FALLBACK_ZXY) return "unknown";
  return attest::to_string(static_cast<attest::ResolutionPath>(static_cast<int>(path)));
}

attest_status attest_config_default(attest_config* config) {
  ATTEST_REQUIRE(config);
  *config = to_c(attest::FilterConfig{});
  return ATTEST_OK;
}

attest_status attest_estimator_create(const attest_config* config, attest_estimator** out) {
  ATTEST_REQUIRE(config);
  ATTEST_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    attest::FilterConfig c;
    if (!to_cpp(*config, c)) return fail(ATTEST_ERR_INVALID_CONFIG, "invalid resolution method");
    *out = new attest_estimator{attest::AttitudeEstimator(c)};
    return ATTEST_OK;
  });
}

void attest_estimator_destroy(attest_estimator* est) { delete est; }

attest_status attest_estimator_reset(attest_estimator* est, int reset_bias) {
  ATTEST_REQUIRE(est);
  est->impl.reset(reset_bias != 0);
  return ATTEST_OK;
}

attest_status attest_estimator_update(attest_estimator* est, double dt, const attest_frame* frame) {
  ATTEST_REQUIRE(est);
  ATTEST_REQUIRE(frame);
  return guarded([&] {
    attest::SensorFrame f;
    if (!to_cpp(*frame, f)) return fail(ATTEST_ERR_INVALID_ARGUMENT, "invalid magnetometer mode");
    est->impl.update(dt, f);
    return ATTEST_OK;
  });
}

attest_status attest_estimator_trigger_quick_learning(attest_estimator* est) {
  ATTEST_REQUIRE(est);
  est->impl.trigger_quick_learning();
  return ATTEST_OK;
}

attest_status attest_estimator_get_state(const attest_estimator* est, attest_state* out) {
  ATTEST_REQUIRE(est);
  ATTEST_REQUIRE(out);
  const attest::EstimatorState& s = est->impl.state();
  out->attitude = to_c(s.q_hat);
  out->bias = to_c(s.bias);
  out->lambda = s.lambda;
  out->quick_active = s.quick_active;
  out->kp = s.gains.kp;
  out->ki = s.gains.ki;
  out->omega_e = to_c(s.omega_e);
  out->path = to_c(s.path);
  out->correction_applied = s.correction_applied;
  out->mag_used = s.mag_used;
  out->last_dt = s.last_dt;
  return ATTEST_OK;
}

attest_status attest_estimator_set_attitude(attest_estimator* est, attest_quat q) {
  ATTEST_REQUIRE(est);
  return guarded([&] {
    est->impl.set_attitude(to_cpp(q));
    return ATTEST_OK;
  });
}

attest_status attest_estimator_set_bias(attest_estimator* est, attest_vec3 bias) {
  ATTEST_REQUIRE(est);
  return guarded([&] {
    est->impl.set_bias(to_cpp(bias));
    return ATTEST_OK;
  });
}

attest_status attest_estimator_stable_output(const attest_estimator* est, attest_quat* out, int* singular) {
  ATTEST_REQUIRE(est);
  ATTEST_REQUIRE(out);
  const attest::StableOutput s = est->impl.stable_output();
  *out = to_c(s.q);
  if (singular) *singular = s.singular;
  return ATTEST_OK;
}

attest_status attest_fused_yaw(attest_quat q, double* out) {
  ATTEST_REQUIRE(out);
  return guarded([&] {
    *out = attest::fused_yaw(to_cpp(q));
    return ATTEST_OK;
  });
}

attest_status attest_zyx_yaw(attest_quat q, double* out) {
  ATTEST_REQUIRE(out);
  return guarded([&] {
    *out = attest::zyx_yaw(to_cpp(q));
    return ATTEST_OK;
  });
}

attest_status attest_zyx_pitch_roll(attest_quat q, double* pitch, double* roll) {
  ATTEST_REQUIRE(pitch);
  ATTEST_REQUIRE(roll);
  *pitch = attest::zyx_pitch(to_cpp(q));
  *roll = attest::zyx_roll(to_cpp(q));
  return ATTEST_OK;
}

attest_status attest_remove_fused_yaw(attest_quat q, attest_quat* out) {
  ATTEST_REQUIRE(out);
  return guarded([&] {
    *out = to_c(attest::remove_fused_yaw(to_cpp(q)));
    return ATTEST_OK;
  });
}

attest_status attest_attitude_error_angle(attest_quat a, attest_quat b, double* out) {
  ATTEST_REQUIRE(out);
  *out = attest::sim::attitude_error_angle(to_cpp(a), to_cpp(b));
  return ATTEST_OK;
}

attest_status attest_tilt_error_angle(attest_quat truth, attest_quat estimate, double* out) {
  ATTEST_REQUIRE(out);
  *out = attest::sim::tilt_error_angle(to_cpp(truth), to_cpp(estimate));
  return ATTEST_OK;
}

attest_status attest_scenario_params_default(attest_scenario_params* params) {
  ATTEST_REQUIRE(params);
  *params = attest_scenario_params{"static", 0, 0.0, 100.0, 0};
  return ATTEST_OK;
}

attest_status attest_scenario_create(const attest_scenario_params* params, attest_scenario** out) {
  ATTEST_REQUIRE(params);
  ATTEST_REQUIRE(params->name);
  ATTEST_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    attest::sim::ScenarioParams p;
    p.name = params->name;
    p.seed = params->seed;
    p.duration = params->duration;
    p.rate = params->rate;
    p.ideal = params->ideal != 0;
    *out = new attest_scenario{attest::sim::make_scenario(p)};
    return ATTEST_OK;
  });
}

void attest_scenario_destroy(attest_scenario* sc) { delete sc; }

size_t attest_scenario_size(const attest_scenario* sc) { return sc ? sc->impl.frames.size() : 0; }

attest_status attest_scenario_frame(const attest_scenario* sc, size_t index, attest_frame* out) {
  ATTEST_REQUIRE(sc);
  ATTEST_REQUIRE(out);
  if (index >= sc->impl.frames.size()) return fail(ATTEST_ERR_OUT_OF_RANGE, "frame index out of range");
  *out = to_c(sc->impl.frames[index]);
  return ATTEST_OK;
}

attest_status attest_scenario_truth(const attest_scenario* sc, size_t index, attest_quat* out) {
  ATTEST_REQUIRE(sc);
  ATTEST_REQUIRE(out);
  if (index >= sc->impl.truth.samples.size()) return fail(ATTEST_ERR_OUT_OF_RANGE, "truth index out of range");
  *out = to_c(sc->impl.truth.samples[index].q);
  return ATTEST_OK;
}

attest_status attest_scenario_mag_reference(const attest_scenario* sc, attest_vec3* out) {
  ATTEST_REQUIRE(sc);
  ATTEST_REQUIRE(out);
  *out = to_c(sc->impl.mag_reference);
  return ATTEST_OK;
}

attest_status attest_bench(attest_method method, size_t iterations, attest_bench_result* out) {
  ATTEST_REQUIRE(out);
  attest::ResolutionMethod m;
  if (!to_cpp(method, m)) return fail(ATTEST_ERR_INVALID_ARGUMENT, "invalid resolution method");
  if (iterations == 0) return fail(ATTEST_ERR_INVALID_ARGUMENT, "iterations must be positive");
  return guarded([&] {
    const attest::BenchResult r = attest::benchmark_updates(m, iterations);
    *out = attest_bench_result{r.iterations, r.total_s, r.mean_ns, r.updates_per_s};
    return ATTEST_OK;
  });
}

}  // extern "C"
