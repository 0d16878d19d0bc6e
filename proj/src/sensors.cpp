#include "attest/sensors.hpp"

#include <algorithm>

#include "attest/error.hpp"

namespace attest {

std::optional<Vec3> try_acc_to_up_vector(const Vec3& acc, const Calibration& cal) noexcept {
  const Vec3 a = acc - cal.acc_bias;
  const double n = norm(a);
  if (!(n > 1e-3 * cal.gravity) || !std::isfinite(n)) return std::nullopt;
  return a * (-1.0 / n);
}

Vec3 acc_to_up_vector(const Vec3& acc, const Calibration& cal) {
  if (auto r = try_acc_to_up_vector(acc, cal)) return *r;
  throw DegenerateInputError("accelerometer norm too small to define the up direction");
}

double reconstruct_acc_z(double ax, double ay, double g) {
  return -std::sqrt(std::max(g * g - ax * ax - ay * ay, 0.0));
}

std::optional<Vec3> mag_to_unit(MagMode mode, const Vec3& mag, double heading, const Calibration& cal) noexcept {
  Vec3 m;
  switch (mode) {
    case MagMode::kAbsent:
      return std::nullopt;
    case MagMode::kHeadingOnly:
      if (!std::isfinite(heading)) return std::nullopt;
      return Vec3{std::cos(heading), std::sin(heading), 0.0};
    case MagMode::kFull3d:
      m = mag - cal.mag_bias;
      break;
    case MagMode::kXyOnly:
      m = {mag.x - cal.mag_bias.x, mag.y - cal.mag_bias.y, 0.0};
      break;
  }
  const double n = norm(m);
  if (!(n > kMagEps) || !std::isfinite(n)) return std::nullopt;
  return m * (1.0 / n);
}

std::optional<Vec3> mag_to_vector(const SensorFrame& f, const Calibration& cal) noexcept {
  Vec3 m;
  switch (f.mag_mode) {
    case MagMode::kAbsent:
      return std::nullopt;
    case MagMode::kHeadingOnly:
      if (!std::isfinite(f.heading)) return std::nullopt;
      return Vec3{std::cos(f.heading), std::sin(f.heading), 0.0};
    case MagMode::kFull3d:
      m = f.mag - cal.mag_bias;
      break;
    case MagMode::kXyOnly:
      m = {f.mag.x - cal.mag_bias.x, f.mag.y - cal.mag_bias.y, 0.0};
      break;
  }
  const double n_sq = norm_sq(m);
  if (!(n_sq > kMagEps * kMagEps) || !std::isfinite(n_sq)) return std::nullopt;
  return m;
}

Vec3 frame_acc(const SensorFrame& f, const Calibration& cal) {
  if (f.acc_z_valid) return f.acc;
  // The reconstruction solves |acc| = g for the raw reading, so it is done
  // on the unbiased x/y components and the bias re-added afterwards.
  const double ax = f.acc.x - cal.acc_bias.x;
  const double ay = f.acc.y - cal.acc_bias.y;
  return {f.acc.x, f.acc.y, reconstruct_acc_z(ax, ay, cal.gravity) + cal.acc_bias.z};
}

}  // namespace attest
