#include "attest/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "attest/error.hpp"

namespace attest::sim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exact rotation produced by a constant body rate over h seconds.
Quat rate_increment(const Vec3& omega, double h) { return axis_angle(omega, norm(omega) * h); }

Quat zyx_quat(double yaw, double pitch, double roll) {
  return z_rotation(yaw) * axis_angle({0.0, 1.0, 0.0}, pitch) * axis_angle({1.0, 0.0, 0.0}, roll);
}

Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  for (;;) {
    const Quat q{n01(rng), n01(rng), n01(rng), n01(rng)};
    if (auto u = try_quat_normalize(q); u && quat_norm(q) > 1e-3) return *u;
  }
}

// Keeps consecutive samples in the same hemisphere of S^3.
void make_continuous(std::vector<TrajectorySample>& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (quat_dot(s[i - 1].q, s[i].q) < 0.0) s[i].q = -s[i].q;
  }
}

struct TumbleProfile {
  // Per axis: three sinusoids with amplitude, angular frequency, phase.
  std::array<std::array<double, 9>, 3> terms{};

  Vec3 at(double t) const {
    double v[3];
    for (int a = 0; a < 3; ++a) {
      v[a] = 0.0;
      for (int k = 0; k < 3; ++k) {
        const auto& c = terms[static_cast<std::size_t>(a)];
        v[a] += c[static_cast<std::size_t>(3 * k)] *
                std::sin(c[static_cast<std::size_t>(3 * k + 1)] * t + c[static_cast<std::size_t>(3 * k + 2)]);
      }
    }
    return {v[0], v[1], v[2]};
  }
};

}  // namespace

SensorDefects SensorDefects::standard(std::uint64_t seed) {
  SensorDefects d;
  d.gyro_bias = {0.1, 0.1, 0.1};
  d.gyro_noise = 0.02;
  d.acc_noise = 0.1;
  d.mag_noise = 0.02;
  d.seed = seed;
  return d;
}

Trajectory generate_trajectory(const Motion& motion, double duration, double rate) {
  if (!(duration > 0.0) || !(rate > 0.0) || !std::isfinite(duration) || !std::isfinite(rate))
    throw InvalidArgumentError("trajectory duration and rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  Trajectory traj;
  traj.rate = rate;
  traj.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) traj.samples[i].t = static_cast<double>(i) / rate;

  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, StaticMotion>) {
          const Quat q0 = quat_normalize(m.q0);
          for (auto& s : traj.samples) s.q = q0;
        } else if constexpr (std::is_same_v<M, StepMotion>) {
          const Quat q0 = quat_normalize(m.q0);
          const Quat q1 = quat_normalize(m.q1);
          for (auto& s : traj.samples) s.q = s.t < m.t_step ? q0 : q1;
        } else if constexpr (std::is_same_v<M, ConstRateMotion>) {
          const Quat q0 = quat_normalize(m.q0);
          for (auto& s : traj.samples) {
            s.q = q0 * rate_increment(m.omega, s.t);
            s.omega = m.omega;
          }
          make_continuous(traj.samples);
        } else if constexpr (std::is_same_v<M, SinusoidMotion>) {
          const Quat q0 = quat_normalize(m.q0);
          const Vec3 axis = normalized(m.axis);
          const double w = kTwoPi * m.frequency;
          for (auto& s : traj.samples) {
            s.q = q0 * axis_angle(axis, m.amplitude * std::sin(w * s.t));
            s.omega = axis * (m.amplitude * w * std::cos(w * s.t));
          }
        } else if constexpr (std::is_same_v<M, WobbleMotion>) {
          const Vec3 w = m.frequency * kTwoPi;
          for (auto& s : traj.samples) {
            const double t = s.t;
            const double yaw = m.amplitude.x * std::sin(w.x * t + m.phase.x);
            const double pitch = m.amplitude.y * std::sin(w.y * t + m.phase.y);
            const double roll = m.amplitude.z * std::sin(w.z * t + m.phase.z);
            const double dyaw = m.amplitude.x * w.x * std::cos(w.x * t + m.phase.x);
            const double dpitch = m.amplitude.y * w.y * std::cos(w.y * t + m.phase.y);
            const double droll = m.amplitude.z * w.z * std::cos(w.z * t + m.phase.z);
            const double sp = std::sin(pitch), cp = std::cos(pitch);
            const double sr = std::sin(roll), cr = std::cos(roll);
            s.q = zyx_quat(yaw, pitch, roll);
            s.omega = {droll - dyaw * sp, dpitch * cr + dyaw * cp * sr, -dpitch * sr + dyaw * cp * cr};
          }
          make_continuous(traj.samples);
        } else if constexpr (std::is_same_v<M, TumbleMotion>) {
          std::mt19937_64 rng(m.seed);
          std::uniform_real_distribution<double> u01(0.0, 1.0);
          TumbleProfile prof;
          for (auto& axis : prof.terms) {
            for (int k = 0; k < 3; ++k) {
              axis[static_cast<std::size_t>(3 * k)] = (2.0 * u01(rng) - 1.0) * m.max_rate / 3.0;
              axis[static_cast<std::size_t>(3 * k + 1)] = kTwoPi * (0.05 + 0.55 * u01(rng));
              axis[static_cast<std::size_t>(3 * k + 2)] = kTwoPi * u01(rng);
            }
          }
          Quat q = random_quat(rng);
          constexpr int kSub = 20;
          const double h = 1.0 / (rate * kSub);
          for (std::size_t i = 0; i < n; ++i) {
            auto& s = traj.samples[i];
            s.q = q;
            s.omega = prof.at(s.t);
            for (int k = 0; k < kSub; ++k) {
              const double tm = s.t + (k + 0.5) * h;
              q = quat_normalize(q * rate_increment(prof.at(tm), h));
            }
          }
          make_continuous(traj.samples);
        }
      },
      motion);
  return traj;
}

std::vector<SensorFrame> synthesize_sensors(const Trajectory& traj, const SensorDefects& d, const Vec3& mag_reference,
                                            double gravity) {
  if (d.gyro_noise < 0.0 || d.acc_noise < 0.0 || d.mag_noise < 0.0)
    throw InvalidArgumentError("noise sigma must be non-negative");
  for (std::size_t i = 0; i < d.faults.size(); ++i) {
    const auto& a = d.faults[i];
    if (!(a.t_end > a.t_start)) throw InvalidArgumentError("fault window must have t_end > t_start");
    for (std::size_t j = i + 1; j < d.faults.size(); ++j) {
      const auto& b = d.faults[j];
      if (a.channel == b.channel && a.t_start < b.t_end && b.t_start < a.t_end)
        throw InvalidArgumentError("fault windows overlap on the same channel");
    }
  }

  // Independent streams per channel; each owns its distribution so cached
  // normal deviates never leak between channels.
  struct NoiseStream {
    std::mt19937_64 rng;
    std::normal_distribution<double> n01;
    Vec3 draw(double sigma) {
      if (sigma == 0.0) return {};
      const double x = n01(rng), y = n01(rng), z = n01(rng);
      return Vec3{x, y, z} * sigma;
    }
  };
  auto make_stream = [&](std::uint32_t channel) {
    std::seed_seq seq{static_cast<std::uint32_t>(d.seed), static_cast<std::uint32_t>(d.seed >> 32), channel};
    return NoiseStream{std::mt19937_64(seq), {}};
  };
  NoiseStream gyro_noise = make_stream(1), acc_noise = make_stream(2), mag_noise = make_stream(3);
  auto fault = [&](Channel c, double t) -> const FaultWindow* {
    for (const auto& f : d.faults)
      if (f.channel == c && t >= f.t_start && t < f.t_end) return &f;
    return nullptr;
  };

  const Vec3 gravity_vec{0.0, 0.0, -gravity};
  std::vector<SensorFrame> frames(traj.samples.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& s = traj.samples[i];
    const Quat inv = quat_conjugate(s.q);
    SensorFrame& f = frames[i];
    f.t = s.t;
    f.gyro = s.omega + d.gyro_bias + gyro_noise.draw(d.gyro_noise);
    f.acc = rotate_vector(inv, gravity_vec) + d.acc_bias + acc_noise.draw(d.acc_noise);
    f.mag = rotate_vector(inv, mag_reference) + d.mag_bias + mag_noise.draw(d.mag_noise);
    f.mag_mode = MagMode::kFull3d;
    if (const auto* w = fault(Channel::kGyro, s.t)) f.gyro = w->value;
    if (const auto* w = fault(Channel::kAcc, s.t)) f.acc = w->value;
    if (const auto* w = fault(Channel::kMag, s.t)) f.mag = w->value;
  }
  return frames;
}

double oracle_fused_yaw(const Quat& q) {
  const Mat3 r = quat_to_matrix(q);
  const Vec3 z_a{0.0, 0.0, 1.0};
  const Vec3 z_b = r.col(2);
  const Vec3 x_b = r.col(0);
  const Vec3 axis = cross(z_b, z_a);
  const double s = norm(axis);
  const double c = dot(z_b, z_a);
  if (s <= kSingularEps && c < 0.0) throw SingularityError("oracle fused yaw: body is upside down");
  Vec3 x_c = x_b;
  if (s > 0.0) {
    // Rodrigues rotation of x_b about the unit axis by the angle between z_b and z_a.
    const Vec3 k = axis * (1.0 / s);
    const double angle = std::atan2(s, c);
    const double ca = std::cos(angle), sa = std::sin(angle);
    x_c = x_b * ca + cross(k, x_b) * sa + k * (dot(k, x_b) * (1.0 - ca));
  }
  return wrap_angle(std::atan2(x_c.y, x_c.x));
}

std::vector<double> linear_1d_filter(std::span<const std::pair<double, double>> input, double kp, double ki,
                                     double dt, double theta0, double bias0) {
  if (kp < 0.0 || ki < 0.0 || !(dt > 0.0)) throw InvalidArgumentError("1D filter needs gains >= 0 and dt > 0");
  std::vector<double> out;
  out.reserve(input.size());
  double theta = theta0;
  double bias = bias0;
  for (const auto& [rate, measured] : input) {
    const double err = measured - theta;
    theta += dt * ((rate - bias) + kp * err);
    bias -= dt * ki * err;
    out.push_back(theta);
  }
  return out;
}

double attitude_error_angle(const Quat& a, const Quat& b) {
  const Quat e = quat_conjugate(a) * b;
  return 2.0 * std::atan2(norm(e.vec()), std::abs(e.w));
}

double tilt_error_angle(const Quat& truth, const Quat& estimate) {
  const Vec3 ez{0.0, 0.0, 1.0};
  const Vec3 a = rotate_vector(quat_conjugate(truth), ez);
  const Vec3 b = rotate_vector(quat_conjugate(estimate), ez);
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

std::vector<std::string> scenario_names() {
  return {"static", "static-random", "step", "const-rate", "sinusoid", "wobble", "tumble", "fig1", "fig2"};
}

Scenario make_scenario(const ScenarioParams& p) {
  Scenario sc;
  sc.name = p.name;
  sc.defects = SensorDefects::standard(p.seed);
  double duration = 0.0;
  Motion motion;
  if (p.name == "static") {
    motion = StaticMotion{};
    duration = 10.0;
  } else if (p.name == "static-random") {
    std::mt19937_64 rng(p.seed);
    motion = StaticMotion{random_quat(rng)};
    duration = 30.0;
  } else if (p.name == "step" || p.name == "fig2") {
    motion = StepMotion{Quat::identity(), axis_angle({1.0, 1.0, 1.0}, 0.5 * std::numbers::pi), 10.0};
    duration = 25.0;
  } else if (p.name == "const-rate") {
    motion = ConstRateMotion{{0.3, -0.2, 0.5}, Quat::identity()};
    duration = 20.0;
  } else if (p.name == "sinusoid") {
    motion = SinusoidMotion{};
    duration = 20.0;
  } else if (p.name == "wobble" || p.name == "fig1") {
    motion = WobbleMotion{};
    duration = 20.0;
    if (p.name == "fig1") sc.defects.faults.push_back({5.05, 5.6, Channel::kMag, {-0.5, 0.6, 0.35}});
  } else if (p.name == "tumble") {
    motion = TumbleMotion{p.seed, 1.5};
    duration = 20.0;
  } else {
    throw InvalidArgumentError("unknown scenario '" + p.name + "'");
  }
  if (p.duration > 0.0) duration = p.duration;
  if (p.ideal) {
    sc.defects = SensorDefects{};
    sc.defects.seed = p.seed;
  }
  sc.truth = generate_trajectory(motion, duration, p.rate);
  sc.frames = synthesize_sensors(sc.truth, sc.defects, sc.mag_reference, sc.gravity);
  return sc;
}

}  // namespace attest::sim
