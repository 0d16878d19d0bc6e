#include <gtest/gtest.h>

#include <numbers>

#include "attest/resolution.hpp"
#include "support.hpp"

namespace attest {
namespace {

using testing::Gen;
using testing::vec_angle;
constexpr double kPi = std::numbers::pi;
const double kHalfSqrt2 = std::sqrt(0.5);
const Vec3 kZ{0, 0, 1};

Vec3 measured_up(const Quat& q_y) { return rotate_vector(quat_conjugate(q_y), kZ); }

TEST(Magnetometer, FramesCoincide) {
  Gen g(21);
  for (int i = 0; i < 10; ++i) {
    const ResolutionOutcome r = resolve_magnetometer(kZ, {1, 0, 0}, {1, 0, 0}, g.unit_quat());
    EXPECT_EQ(r.path, ResolutionPath::kPrimary);
    EXPECT_QUAT_NEAR(r.q_y, Quat::identity(), 1e-15);
  }
}

TEST(Magnetometer, FieldAlongBodyY) {
  // The body sees north along +y, so the body is yawed by -90 degrees.
  const ResolutionOutcome r = resolve_magnetometer(kZ, {0, 1, 0}, {1, 0, 0}, Quat::identity());
  EXPECT_EQ(r.path, ResolutionPath::kPrimary);
  EXPECT_QUAT_NEAR(r.q_y, (Quat{kHalfSqrt2, 0, 0, -kHalfSqrt2}), 1e-15);
}

TEST(Magnetometer, ReferenceZComponentUnused) {
  const Quat q = axis_angle({0.2, 0.3, 0.9}, 0.8);
  const Vec3 up = measured_up(q);
  const Vec3 mag = rotate_vector(quat_conjugate(q), {0.6, 0.0, -0.8});
  const Quat a = resolve_magnetometer(up, mag, {0.6, 0.0, -0.8}, Quat::identity()).q_y;
  const Quat b = resolve_magnetometer(up, mag, {0.6, 0.0, 5.0}, Quat::identity()).q_y;
  EXPECT_QUAT_NEAR(a, b, 1e-15);
  EXPECT_QUAT_NEAR(a, q, 1e-12);
}

TEST(Magnetometer, ScaleOfFieldIrrelevant) {
  Gen g(22);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 up = g.unit_vec(), m = g.unit_vec();
    const Vec3 ref{g.normal(), g.normal(), 0.0};
    const Quat q = g.unit_quat();
    const ResolutionOutcome a = resolve_magnetometer(up, m, ref, q);
    const ResolutionOutcome b = resolve_magnetometer(up, m * 37.5, ref, q);
    ASSERT_EQ(a.path, b.path);
    ASSERT_LT(testing::quat_distance(a.q_y, b.q_y), 1e-12);
  }
}

TEST(Magnetometer, CollinearFieldFallsBack) {
  const ResolutionOutcome r = resolve_magnetometer(kZ, kZ, {1, 0, 0}, z_rotation(0.4));
  EXPECT_EQ(r.path, ResolutionPath::kFallbackFused);
  EXPECT_QUAT_NEAR(r.q_y, z_rotation(0.4), 1e-15);

  const ResolutionOutcome z = resolve_magnetometer(kZ, kZ, {1, 0, 0}, z_rotation(0.4), ResolutionMethod::kZyxYaw);
  EXPECT_EQ(z.path, ResolutionPath::kFallbackZyx);
  EXPECT_QUAT_NEAR(z.q_y, z_rotation(0.4), 1e-15);
}

TEST(Magnetometer, VerticalReferenceFallsBack) {
  const ResolutionOutcome r = resolve_magnetometer(kZ, {1, 0, 0}, {0, 0, 1}, Quat::identity());
  EXPECT_EQ(r.path, ResolutionPath::kFallbackFused);
  EXPECT_EQ(resolve(ResolutionMethod::kMagnetometer, kZ, nullptr, {1, 0, 0}, Quat::identity()).path,
            ResolutionPath::kFallbackFused);
}

TEST(Magnetometer, HeadingCondition) {
  // Resolved heading of the measured field matches the reference heading.
  Gen g(23);
  for (int i = 0; i < 100000; ++i) {
    const Vec3 up = g.unit_vec(), m = g.unit_vec();
    const Vec3 ref{g.normal(), g.normal(), g.normal()};
    const ResolutionOutcome r = resolve_magnetometer(up, m, ref, g.unit_quat());
    ASSERT_LT(vec_angle(measured_up(r.q_y), up), 1e-10);
    if (r.path != ResolutionPath::kPrimary) continue;
    const Vec3 mg = rotate_vector(r.q_y, m);
    if (std::hypot(mg.x, mg.y) < 1e-6) continue;
    ASSERT_LT(vec_angle({mg.x, mg.y, 0}, {ref.x, ref.y, 0}), 1e-10);
  }
}

TEST(ZyxYaw, IdentityCases) {
  const ResolutionOutcome r = resolve_zyx_yaw(kZ, Quat::identity());
  EXPECT_EQ(r.path, ResolutionPath::kPrimary);
  EXPECT_QUAT_NEAR(r.q_y, Quat::identity(), 1e-15);
  const ResolutionOutcome down = resolve_zyx_yaw({0, 0, -1}, Quat::identity());
  EXPECT_EQ(down.path, ResolutionPath::kPrimary);
  EXPECT_QUAT_NEAR(down.q_y, (Quat{0, 1, 0, 0}), 1e-15);
}

TEST(ZyxYaw, GimbalLockUsesZxy) {
  // Global x in body coordinates lies along the measured up vector.
  const Quat q_hat = axis_angle({0, 1, 0}, kPi / 2);
  const Vec3 x_h = rotate_vector(quat_conjugate(q_hat), {1, 0, 0});
  ASSERT_LT(norm(cross(x_h, kZ)), 1e-15);
  const ResolutionOutcome r = resolve_zyx_yaw(kZ, q_hat);
  EXPECT_EQ(r.path, ResolutionPath::kFallbackZxy);
  EXPECT_LT(vec_angle(measured_up(r.q_y), kZ), 1e-12);
  EXPECT_NEAR(quat_norm(r.q_y), 1.0, 1e-15);
}

TEST(ZyxYaw, ZeroRelativeYaw) {
  Gen g(24);
  for (int i = 0; i < 100000; ++i) {
    const Quat q = g.unit_quat();
    const Vec3 up = g.unit_vec();
    const ResolutionOutcome r = resolve_zyx_yaw(up, q);
    ASSERT_LT(vec_angle(measured_up(r.q_y), up), 1e-10);
    ASSERT_EQ(r.path, ResolutionPath::kPrimary);
    // ZYX yaw of the estimated global frame H relative to G.
    const auto yaw = try_zyx_yaw(r.q_y * quat_conjugate(q));
    if (yaw) ASSERT_LT(std::abs(*yaw), 1e-10);
  }
}

TEST(FusedYaw, Examples) {
  const ResolutionOutcome r = resolve_fused_yaw(kZ, Quat::identity());
  EXPECT_EQ(r.path, ResolutionPath::kPrimary);
  EXPECT_QUAT_NEAR(r.q_y, Quat::identity(), 0.0);

  for (double psi : {-2.0, 0.3, 3.0}) {
    const ResolutionOutcome y = resolve_fused_yaw(kZ, z_rotation(psi));
    EXPECT_QUAT_NEAR(y.q_y, z_rotation(psi), 1e-15);
  }

  const ResolutionOutcome down = resolve_fused_yaw({0, 0, -1}, Quat::identity());
  EXPECT_EQ(down.path, ResolutionPath::kFallbackZyx);
  EXPECT_LT(vec_angle(measured_up(down.q_y), {0, 0, -1}), 1e-12);
}

TEST(FusedYaw, ZeroRelativeYaw) {
  Gen g(25);
  for (int i = 0; i < 100000; ++i) {
    const Quat q = g.unit_quat();
    const Vec3 up = g.unit_vec();
    const ResolutionOutcome r = resolve_fused_yaw(up, q);
    ASSERT_LT(vec_angle(measured_up(r.q_y), up), 1e-10);
    ASSERT_EQ(r.path, ResolutionPath::kPrimary);
    if (auto yaw = try_fused_yaw(r.q_y * quat_conjugate(q))) ASSERT_LT(std::abs(*yaw), 1e-10);
  }
}

TEST(FusedYaw, MinimalCorrection) {
  // With zero relative fused yaw, the error rotation is the smallest one
  // that tilts the estimated up vector onto the measured one.
  Gen g(26);
  for (int i = 0; i < 10000; ++i) {
    const Quat q = g.unit_quat();
    const Vec3 up = g.unit_vec();
    const Quat rel = quat_conjugate(q) * resolve_fused_yaw(up, q).q_y;
    const double angle = 2.0 * std::atan2(norm(rel.vec()), std::abs(rel.w));
    ASSERT_NEAR(angle, vec_angle(measured_up(q), up), 1e-9);
  }
}

TEST(Resolution, FailureDependsOnlyOnRelativeOrientation) {
  // The fallback decision depends on q_y * conj(q_hat) alone, so rotating the
  // body by a common rotation h on the right never changes the path.
  Gen g(27);
  const Quat errors[] = {axis_angle({0, 1, 0}, kPi / 2), axis_angle({1, 0, 0}, kPi), axis_angle({0.6, 0.8, 0}, kPi),
                         Quat::identity(), axis_angle({0.3, -0.2, 0.9}, 0.7)};
  for (const Quat& e : errors) {
    for (int i = 0; i < 200; ++i) {
      const Quat q_hat = g.unit_quat();
      const Quat truth = e * q_hat;
      const Quat h = g.unit_quat();
      const Vec3 up = measured_up(truth);
      const Vec3 up_h = measured_up(truth * h);
      const ResolutionPath f = resolve_fused_yaw(up, q_hat).path;
      const ResolutionPath z = resolve_zyx_yaw(up, q_hat).path;
      EXPECT_EQ(resolve_fused_yaw(up_h, q_hat * h).path, f);
      EXPECT_EQ(resolve_zyx_yaw(up_h, q_hat * h).path, z);
      // A common rotation about the global z axis preserves the fused yaw singular set.
      const Quat s = z_rotation(g.uniform(-kPi, kPi));
      EXPECT_EQ(resolve_fused_yaw(measured_up(s * truth), s * q_hat).path, f);
    }
  }
  const Quat q_hat = axis_angle({0.4, 0.1, -0.3}, 2.0);
  EXPECT_EQ(resolve_fused_yaw(measured_up(axis_angle({1, 0, 0}, kPi) * q_hat), q_hat).path,
            ResolutionPath::kFallbackZyx);
  EXPECT_EQ(resolve_zyx_yaw(measured_up(axis_angle({0, 1, 0}, kPi / 2) * q_hat), q_hat).path,
            ResolutionPath::kFallbackZxy);
}

TEST(Resolution, PathsForKnownSingularErrors) {
  EXPECT_EQ(resolve_fused_yaw(measured_up(axis_angle({1, 0, 0}, kPi)), Quat::identity()).path,
            ResolutionPath::kFallbackZyx);
  EXPECT_EQ(resolve_zyx_yaw(measured_up(axis_angle({0, 1, 0}, kPi / 2)), Quat::identity()).path,
            ResolutionPath::kFallbackZxy);
}

TEST(Resolution, TotalOnAdversarialInputs) {
  // Includes the non-unit pure vector quaternions for which global x and y
  // in body coordinates coincide.
  Gen g(28);
  const Vec3 axes[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  std::vector<Quat> qs = {Quat::identity(), {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                          axis_angle({0, 1, 0}, kPi / 2), axis_angle({1, 0, 0}, kPi / 2),
                          {0, kHalfSqrt2, 0, 0}, {0, 0, kHalfSqrt2, 0}, {0.5, 0.5, 0.5, 0.5}};
  for (int i = 0; i < 200; ++i) qs.push_back(g.unit_quat());
  for (const Quat& q : qs) {
    for (const Vec3& up : axes) {
      for (const Vec3& m : axes) {
        for (auto method : {ResolutionMethod::kMagnetometer, ResolutionMethod::kZyxYaw, ResolutionMethod::kFusedYaw}) {
          for (auto fallback : {ResolutionMethod::kFusedYaw, ResolutionMethod::kZyxYaw}) {
            const ResolutionOutcome r = resolve(method, up, &m, {1, 0, 0}, q, fallback);
            ASSERT_TRUE(std::isfinite(r.q_y.w) && std::isfinite(r.q_y.x) && std::isfinite(r.q_y.y) &&
                        std::isfinite(r.q_y.z));
            ASSERT_NEAR(quat_norm(r.q_y), 1.0, 1e-12);
            // Respecting the up vector presumes a unit q_hat.
            if (std::abs(quat_norm(q) - 1.0) < 1e-12) ASSERT_LT(vec_angle(measured_up(r.q_y), up), 1e-10);
          }
        }
      }
    }
  }
}

TEST(Resolution, Names) {
  EXPECT_STREQ(to_string(ResolutionMethod::kMagnetometer), "mag");
  EXPECT_STREQ(to_string(ResolutionMethod::kZyxYaw), "zyx");
  EXPECT_STREQ(to_string(ResolutionMethod::kFusedYaw), "fused");
  EXPECT_STREQ(to_string(ResolutionPath::kPrimary), "primary");
  EXPECT_STREQ(to_string(ResolutionPath::kFallbackFused), "fallback_fused");
  EXPECT_STREQ(to_string(ResolutionPath::kFallbackZyx), "fallback_zyx");
  EXPECT_STREQ(to_string(ResolutionPath::kFallbackZxy), "fallback_zxy");
}

}  // namespace
}  // namespace attest
