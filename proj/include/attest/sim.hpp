// Simulation harness: ground-truth trajectories, sensor synthesis with seeded
// defects, independent reference computations and error metrics.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "attest/rotation.hpp"
#include "attest/sensors.hpp"

namespace attest::sim {

struct TrajectorySample {
  double t = 0.0;
  Quat q;      ///< true global-to-body rotation
  Vec3 omega;  ///< true body-frame angular velocity, rad/s
};

struct Trajectory {
  double rate = 0.0;  ///< Hz
  std::vector<TrajectorySample> samples;
};

struct StaticMotion {
  Quat q0;
};
/// Holds q0, then jumps to q1 at t_step (zero angular velocity throughout).
struct StepMotion {
  Quat q0;
  Quat q1;
  double t_step = 1.0;
};
/// q(t) = q0 * exp(omega t / 2), exactly.
struct ConstRateMotion {
  Vec3 omega;
  Quat q0;
};
/// Oscillation about a fixed body axis: q(t) = q0 * axis_angle(axis, amplitude sin(2 pi f t)).
struct SinusoidMotion {
  Vec3 axis{0.0, 1.0, 0.0};
  double amplitude = 0.5;  ///< rad
  double frequency = 0.5;  ///< Hz
  Quat q0;
};
/// ZYX Euler angles each oscillating sinusoidally; keeps away from gimbal lock
/// for moderate pitch amplitudes.
struct WobbleMotion {
  Vec3 amplitude{0.4, 0.35, 0.25};  ///< yaw, pitch, roll in rad
  Vec3 frequency{0.05, 0.4, 0.25};  ///< Hz
  Vec3 phase{0.0, 0.0, 1.0};        ///< rad
};
/// Random smooth body rates (sum of sinusoids per axis) from a random start.
struct TumbleMotion {
  std::uint64_t seed = 0;
  double max_rate = 1.5;  ///< rad/s, bound per axis
};

using Motion = std::variant<StaticMotion, StepMotion, ConstRateMotion, SinusoidMotion, WobbleMotion, TumbleMotion>;

/// Samples at t_i = i / rate for i in [0, round(duration * rate)).
/// Throws InvalidArgumentError for non-positive duration or rate.
Trajectory generate_trajectory(const Motion& motion, double duration, double rate);

enum class Channel { kGyro, kAcc, kMag };

/// While t_start <= t < t_end, the channel reads `value` instead of the model output.
struct FaultWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  Channel channel = Channel::kMag;
  Vec3 value;
};

struct SensorDefects {
  Vec3 gyro_bias;
  double gyro_noise = 0.0;  ///< sigma, rad/s
  Vec3 acc_bias;
  double acc_noise = 0.0;  ///< sigma, m/s^2
  Vec3 mag_bias;
  double mag_noise = 0.0;  ///< sigma, field units
  std::vector<FaultWindow> faults;
  std::uint64_t seed = 0;

  /// Standard scenario: 0.1 rad/s gyro bias per axis, sigma 0.02 rad/s, 0.1 m/s^2, 0.02.
  static SensorDefects standard(std::uint64_t seed = 0);
};

inline constexpr Vec3 kDefaultMagReference{0.6, 0.0, -0.8};

/// gyro = omega + bias + noise, acc = R_BG (0, 0, -g) + bias + noise,
/// mag = R_BG m_E + bias + noise; fault windows override. Frames carry full
/// 3D magnetometer data. Throws InvalidArgumentError on overlapping faults or negative sigma.
std::vector<SensorFrame> synthesize_sensors(const Trajectory& traj, const SensorDefects& defects,
                                            const Vec3& mag_reference, double gravity = 9.81);

/// Fused yaw by explicit construction: tilt the body frame back onto the
/// global z-axis by the minimal rotation, then measure the heading of the
/// tilted x-axis. Throws SingularityError when the body is upside down.
double oracle_fused_yaw(const Quat& q);

/// Per-axis linear complementary filter, integrated explicitly with step dt.
/// Each input pair is (measured rate, measured angle).
std::vector<double> linear_1d_filter(std::span<const std::pair<double, double>> input, double kp, double ki,
                                     double dt, double theta0 = 0.0, double bias0 = 0.0);

/// Geodesic distance between two rotations, in [0, pi]; sign-agnostic.
double attitude_error_angle(const Quat& a, const Quat& b);

/// Angle between the true and estimated up vectors (pitch/roll error only).
double tilt_error_angle(const Quat& truth, const Quat& estimate);

/// A ready-to-run experiment: truth, synthesized frames and the reference field.
struct Scenario {
  std::string name;
  Trajectory truth;
  SensorDefects defects;
  Vec3 mag_reference = kDefaultMagReference;
  double gravity = 9.81;
  std::vector<SensorFrame> frames;
};

struct ScenarioParams {
  std::string name = "static";
  std::uint64_t seed = 0;
  double duration = 0.0;  ///< <= 0 selects the scenario default
  double rate = 100.0;
  bool ideal = false;     ///< zero bias, zero noise, no faults
};

/// Named scenarios: static, static-random, step, const-rate, sinusoid,
/// wobble, tumble, fig1 (wobble with a magnetometer fault shortly after 5 s),
/// fig2 (90 degree step at 10 s). Throws InvalidArgumentError for unknown names.
Scenario make_scenario(const ScenarioParams& params);
std::vector<std::string> scenario_names();

}  // namespace attest::sim
