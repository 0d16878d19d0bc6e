// Conversion of raw sensor triples into the unit vectors consumed by the
// orientation resolution step.
#pragma once

#include <optional>

#include "attest/rotation.hpp"

namespace attest {

enum class MagMode {
  kFull3d,       ///< three-axis field vector
  kXyOnly,       ///< two-axis data, z-component unknown and taken as zero
  kHeadingOnly,  ///< relative heading angle only
  kAbsent,
};

/// One time step of raw sensor data.
struct SensorFrame {
  double t = 0.0;  ///< seconds
  Vec3 gyro;       ///< rad/s, body frame
  bool gyro_valid = true;
  Vec3 acc;  ///< m/s^2 proper acceleration; at rest and upright this is (0, 0, -g)
  bool acc_valid = true;
  bool acc_z_valid = true;  ///< false: az is reconstructed from ax, ay and g
  Vec3 mag;                 ///< arbitrary units; used in kFull3d / kXyOnly
  double heading = 0.0;     ///< rad; used in kHeadingOnly
  MagMode mag_mode = MagMode::kAbsent;
};

struct Calibration {
  Vec3 acc_bias;
  Vec3 mag_bias;
  double gravity = 9.81;
  /// Magnetic field reference in global coordinates; only x and y are used.
  Vec3 mag_reference{1.0, 0.0, 0.0};
};

/// Up vector in body coordinates: -(acc - acc_bias) / |acc - acc_bias|.
/// Throws DegenerateInputError if the unbiased norm is <= 1e-3 * g (free fall).
Vec3 acc_to_up_vector(const Vec3& acc, const Calibration& cal);
std::optional<Vec3> try_acc_to_up_vector(const Vec3& acc, const Calibration& cal) noexcept;

/// Missing z-component of a two-axis accelerometer sample, -sqrt(max(g^2 - ax^2 - ay^2, 0)).
double reconstruct_acc_z(double ax, double ay, double g);

inline constexpr double kMagEps = 1e-6;

/// Unit field direction in body coordinates, or nullopt if the channel is
/// absent or the unbiased field is degenerate (norm <= kMagEps).
std::optional<Vec3> mag_to_unit(MagMode mode, const Vec3& mag, double heading, const Calibration& cal) noexcept;
inline std::optional<Vec3> mag_to_unit(const SensorFrame& f, const Calibration& cal) noexcept {
  return mag_to_unit(f.mag_mode, f.mag, f.heading, cal);
}

/// As mag_to_unit without the normalization: the unbiased field (or the unit
/// heading vector), nullopt under the same conditions.
std::optional<Vec3> mag_to_vector(const SensorFrame& f, const Calibration& cal) noexcept;

constexpr Vec3 unbias_gyro(const Vec3& gyro, const Vec3& bias) { return gyro - bias; }

/// Full accelerometer vector of a frame, reconstructing az where required.
Vec3 frame_acc(const SensorFrame& f, const Calibration& cal);

}  // namespace attest
