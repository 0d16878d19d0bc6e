// Random generators and comparison helpers shared by the unit tests.
#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "attest/rotation.hpp"

namespace attest::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return normal_(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Uniform on SO(3): normalized 4D Gaussian.
  Quat unit_quat() {
    for (;;) {
      const Quat q{normal(), normal(), normal(), normal()};
      const double n = quat_norm(q);
      if (n > 1e-6) return {q.w / n, q.x / n, q.y / n, q.z / n};
    }
  }

  Vec3 unit_vec() {
    for (;;) {
      const Vec3 v{normal(), normal(), normal()};
      const double n = norm(v);
      if (n > 1e-6) return v * (1.0 / n);
    }
  }

  Vec3 vec(double scale) { return {scale * normal(), scale * normal(), scale * normal()}; }

  /// Unit quaternion away from the fused yaw singularity (body not upside down).
  Quat upright_quat(double min_wz = 1e-3) {
    for (;;) {
      const Quat q = unit_quat();
      if (q.w * q.w + q.z * q.z > min_wz * min_wz) return q;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

/// Largest component difference of a and b, allowing for the sign ambiguity.
inline double quat_distance(const Quat& a, const Quat& b) {
  const double s = quat_dot(a, b) < 0.0 ? -1.0 : 1.0;
  return std::max({std::abs(a.w - s * b.w), std::abs(a.x - s * b.x), std::abs(a.y - s * b.y),
                   std::abs(a.z - s * b.z)});
}

inline double vec_distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Angle between two non-zero vectors, accurate for small angles.
inline double vec_angle(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

inline double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace attest::testing

#define EXPECT_QUAT_NEAR(a, b, tol) EXPECT_LE(::attest::testing::quat_distance((a), (b)), (tol))
#define EXPECT_VEC_NEAR(a, b, tol) EXPECT_LE(::attest::testing::vec_distance((a), (b)), (tol))
