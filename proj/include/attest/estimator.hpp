// Passive nonlinear complementary filter on SO(3) with gyro bias estimation,
// quick learning and robust measured-orientation resolution.
#pragma once

#include <optional>

#include "attest/resolution.hpp"
#include "attest/rotation.hpp"
#include "attest/sensors.hpp"

namespace attest {

struct PiGains {
  double kp = 0.0;  ///< 1/s
  double ki = 0.0;  ///< 1/s^2
  bool operator==(const PiGains&) const = default;
};

struct FilterConfig {
  PiGains nominal{2.20, 2.65};
  PiGains quick{10.0, 1.25};
  double quick_learn_time = 3.0;  ///< s
  bool quick_learn_on_start = true;
  double nominal_dt = 0.01;  ///< s
  /// The integration step is the measured dt clamped to [low, high] * nominal_dt.
  double dt_low = 0.8;
  double dt_high = 2.2;
  ResolutionMethod method = ResolutionMethod::kFusedYaw;
  /// Yaw method used when the magnetometer method cannot resolve a frame.
  ResolutionMethod mag_fallback = ResolutionMethod::kFusedYaw;
  /// Symmetric bound on each bias component; <= 0 disables the clamp.
  double bias_limit = 1.0;  ///< rad/s
  Calibration calibration;
};

/// Throws InvalidConfigError if any invariant of the config is violated.
void validate(const FilterConfig& config);

struct EstimatorState {
  Quat q_hat;  ///< global to estimated body frame
  Vec3 bias;   ///< rad/s
  double lambda = 1.0;
  bool quick_active = false;
  PiGains gains;  ///< gains applied in the most recent update (current fade otherwise)
  Vec3 omega_e;   ///< last correction term (before the P gain)
  Vec3 omega;     ///< last total angular velocity applied
  ResolutionPath path = ResolutionPath::kPrimary;
  bool correction_applied = false;  ///< false if the last frame had no usable accelerometer
  bool mag_used = false;            ///< true if the last frame resolved via the magnetometer
  double last_dt = 0.0;             ///< coerced integration step of the last update
  // Trapezoidal integration memory.
  bool has_history = false;
  Quat prev_q_rate{0.0, 0.0, 0.0, 0.0};
  Vec3 prev_bias_rate;
};

struct StableOutput {
  Quat q;
  bool singular = false;  ///< q_hat upside down; q is q_hat unchanged
};

class AttitudeEstimator {
 public:
  AttitudeEstimator();
  explicit AttitudeEstimator(const FilterConfig& config);

  /// Back to the identity attitude; quick learning restarts if configured.
  void reset(bool reset_bias = true);

  /// One filter cycle. dt_measured must be finite and >= 0; it is coerced to
  /// the configured range before use. Sensor degeneracies never throw.
  void update(double dt_measured, const SensorFrame& frame);

  void trigger_quick_learning();

  const FilterConfig& config() const { return config_; }
  const EstimatorState& state() const { return state_; }

  const Quat& attitude() const { return state_.q_hat; }
  const Vec3& bias() const { return state_.bias; }
  double lambda() const { return state_.lambda; }
  bool quick_learning_active() const { return state_.quick_active; }
  /// Gains the next update will use.
  PiGains active_gains() const;

  /// Estimate with its fused yaw removed; stable without a magnetometer.
  StableOutput stable_output() const;

  std::optional<double> fused_yaw() const { return try_fused_yaw(state_.q_hat); }
  std::optional<double> zyx_yaw() const { return try_zyx_yaw(state_.q_hat); }
  double pitch() const { return zyx_pitch(state_.q_hat); }
  double roll() const { return zyx_roll(state_.q_hat); }

  void set_attitude(const Quat& q);
  void set_bias(const Vec3& b);
  void set_lambda(double lambda);

  double coerce_dt(double dt_measured) const;

 private:
  FilterConfig config_;
  EstimatorState state_;
};

PiGains blend_gains(const PiGains& nominal, const PiGains& quick, double lambda);

}  // namespace attest
