#include "attest/estimator.hpp"

#include <algorithm>
#include <string>

#include "attest/error.hpp"

namespace attest {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void validate(const FilterConfig& c) {
  auto fail = [](const std::string& what) { throw InvalidConfigError("invalid filter config: " + what); };
  if (!finite_nonneg(c.nominal.kp) || !finite_nonneg(c.nominal.ki)) fail("nominal gains must be finite and >= 0");
  if (!finite_nonneg(c.quick.kp) || !finite_nonneg(c.quick.ki)) fail("quick gains must be finite and >= 0");
  if (!std::isfinite(c.quick_learn_time) || !(c.quick_learn_time > 0.0)) fail("quick learning time must be > 0");
  if (!std::isfinite(c.nominal_dt) || !(c.nominal_dt > 0.0)) fail("nominal dt must be > 0");
  if (!std::isfinite(c.dt_low) || !std::isfinite(c.dt_high) || !(c.dt_low > 0.0) || c.dt_low > c.dt_high)
    fail("dt coercion range must satisfy 0 < low <= high");
  if (c.mag_fallback == ResolutionMethod::kMagnetometer) fail("magnetometer fallback must be a yaw method");
  if (std::isnan(c.bias_limit)) fail("bias limit must not be NaN");
  const Calibration& cal = c.calibration;
  if (!std::isfinite(cal.gravity) || !(cal.gravity > 0.0)) fail("gravity must be > 0");
  if (!is_finite(cal.acc_bias) || !is_finite(cal.mag_bias) || !is_finite(cal.mag_reference))
    fail("calibration vectors must be finite");
}

PiGains blend_gains(const PiGains& nominal, const PiGains& quick, double lambda) {
  return {lambda * nominal.kp + (1.0 - lambda) * quick.kp, lambda * nominal.ki + (1.0 - lambda) * quick.ki};
}

AttitudeEstimator::AttitudeEstimator() : AttitudeEstimator(FilterConfig{}) {}

AttitudeEstimator::AttitudeEstimator(const FilterConfig& config) : config_(config) {
  validate(config_);
  reset();
}

void AttitudeEstimator::reset(bool reset_bias) {
  const Vec3 bias = state_.bias;
  state_ = EstimatorState{};
  if (!reset_bias) state_.bias = bias;
  if (config_.quick_learn_on_start) {
    state_.lambda = 0.0;
    state_.quick_active = true;
  }
  state_.gains = active_gains();
}

void AttitudeEstimator::trigger_quick_learning() {
  state_.lambda = 0.0;
  state_.quick_active = true;
}

PiGains AttitudeEstimator::active_gains() const {
  return blend_gains(config_.nominal, config_.quick, state_.lambda);
}

double AttitudeEstimator::coerce_dt(double dt_measured) const {
  return std::clamp(dt_measured, config_.dt_low * config_.nominal_dt, config_.dt_high * config_.nominal_dt);
}

void AttitudeEstimator::update(double dt_measured, const SensorFrame& f) {
  if (!std::isfinite(dt_measured) || dt_measured < 0.0)
    throw InvalidArgumentError("update: dt must be finite and non-negative");
  const double dt = coerce_dt(dt_measured);
  const Calibration& cal = config_.calibration;
  EstimatorState& s = state_;

  // Measured orientation and correction term.
  Vec3 omega_e;
  s.correction_applied = false;
  s.mag_used = false;
  s.path = ResolutionPath::kPrimary;
  if (f.acc_valid) {
    if (auto up = try_acc_to_up_vector(frame_acc(f, cal), cal)) {
      std::optional<Vec3> mag;
      if (config_.method == ResolutionMethod::kMagnetometer) mag = mag_to_vector(f, cal);
      const ResolutionOutcome r =
          resolve(config_.method, *up, mag ? &*mag : nullptr, cal.mag_reference, s.q_hat, config_.mag_fallback);
      const Quat q_err = quat_conjugate(s.q_hat) * r.q_y;
      omega_e = (2.0 * q_err.w) * q_err.vec();
      s.correction_applied = true;
      s.path = r.path;
      s.mag_used = config_.method == ResolutionMethod::kMagnetometer && r.path == ResolutionPath::kPrimary;
    }
  }

  // Gains for this cycle, then advance the quick learning fade.
  s.gains = active_gains();
  if (s.quick_active) {
    s.lambda = std::min(1.0, s.lambda + dt / config_.quick_learn_time);
    if (s.lambda >= 1.0 - 1e-12) {
      s.lambda = 1.0;
      s.quick_active = false;
    }
  }

  const Vec3 gyro = f.gyro_valid && is_finite(f.gyro) ? f.gyro : Vec3{};
  const Vec3 omega = unbias_gyro(gyro, s.bias) + s.gains.kp * omega_e;

  // dq/dt = 0.5 * q_hat * (0, omega), trapezoidal once a previous rate exists.
  const Quat q_rate = quat_multiply(s.q_hat, Quat{0.0, 0.5 * omega.x, 0.5 * omega.y, 0.5 * omega.z});
  const Vec3 bias_rate = -s.gains.ki * omega_e;
  Quat q = s.q_hat;
  if (s.has_history) {
    const double h = 0.5 * dt;
    q = {q.w + h * (q_rate.w + s.prev_q_rate.w), q.x + h * (q_rate.x + s.prev_q_rate.x),
         q.y + h * (q_rate.y + s.prev_q_rate.y), q.z + h * (q_rate.z + s.prev_q_rate.z)};
    s.bias += h * (bias_rate + s.prev_bias_rate);
  } else {
    q = {q.w + dt * q_rate.w, q.x + dt * q_rate.x, q.y + dt * q_rate.y, q.z + dt * q_rate.z};
    s.bias += dt * bias_rate;
  }
  if (auto qn = try_quat_normalize(q); qn && std::isfinite(qn->w) && std::isfinite(qn->x) &&
                                         std::isfinite(qn->y) && std::isfinite(qn->z)) {
    s.q_hat = *qn;
  }
  if (config_.bias_limit > 0.0) {
    const double b = config_.bias_limit;
    s.bias = {std::clamp(s.bias.x, -b, b), std::clamp(s.bias.y, -b, b), std::clamp(s.bias.z, -b, b)};
  }

  s.omega_e = omega_e;
  s.omega = omega;
  s.last_dt = dt;
  s.prev_q_rate = q_rate;
  s.prev_bias_rate = bias_rate;
  s.has_history = true;
}

StableOutput AttitudeEstimator::stable_output() const {
  if (auto q = try_remove_fused_yaw(state_.q_hat)) return {*q, false};
  return {state_.q_hat, true};
}

void AttitudeEstimator::set_attitude(const Quat& q) {
  state_.q_hat = quat_normalize(q);
  state_.has_history = false;
}

void AttitudeEstimator::set_bias(const Vec3& b) {
  if (!is_finite(b)) throw InvalidArgumentError("bias must be finite");
  state_.bias = b;
}

void AttitudeEstimator::set_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgumentError("lambda must lie in [0, 1]");
  state_.lambda = lambda;
  state_.quick_active = lambda < 1.0;
}

}  // namespace attest
