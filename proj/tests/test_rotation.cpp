#include <gtest/gtest.h>

#include <array>
#include <numbers>

#include "attest/error.hpp"
#include "attest/rotation.hpp"
#include "support.hpp"

namespace attest {
namespace {

using testing::Gen;
constexpr double kPi = std::numbers::pi;
const double kHalfSqrt2 = std::sqrt(0.5);

TEST(RotateVector, IdentityLeavesVector) {
  EXPECT_EQ(rotate_vector(Quat::identity(), {1.0, 2.0, 3.0}), (Vec3{1.0, 2.0, 3.0}));
}

TEST(RotateVector, QuarterTurnAboutZ) {
  const Vec3 r = rotate_vector({kHalfSqrt2, 0.0, 0.0, kHalfSqrt2}, {1.0, 0.0, 0.0});
  EXPECT_VEC_NEAR(r, (Vec3{0.0, 1.0, 0.0}), 1e-15);
}

TEST(RotateVector, MatchesMatrixProductAndPreservesNorm) {
  Gen g(1);
  for (int i = 0; i < 100000; ++i) {
    const Quat q = g.unit_quat();
    const Vec3 v = g.vec(1.0);
    const Vec3 r = rotate_vector(q, v);
    ASSERT_LE(norm(r - quat_to_matrix(q) * v), 1e-12 * std::max(1.0, norm(v)));
    ASSERT_NEAR(norm(r), norm(v), 1e-12);
  }
}

TEST(QuatToMatrix, Identity) {
  const Mat3 r = quat_to_matrix(Quat::identity());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(r(i, j), i == j ? 1.0 : 0.0);
}

TEST(QuatToMatrix, HalfTurnAboutZ) {
  const Mat3 r = quat_to_matrix({0.0, 0.0, 0.0, 1.0});
  const std::array<double, 9> expected{-1, 0, 0, 0, -1, 0, 0, 0, 1};
  for (int k = 0; k < 9; ++k) EXPECT_EQ(r(k / 3, k % 3), expected[static_cast<std::size_t>(k)]);
}

TEST(QuatToMatrix, ColumnsAreBodyAxes) {
  // R_GB maps body coordinates to global ones, so column i is the body axis i.
  const Quat q = axis_angle({0.3, -0.5, 0.8}, 1.1);
  const Mat3 r = quat_to_matrix(q);
  EXPECT_VEC_NEAR(r.col(0), rotate_vector(q, {1, 0, 0}), 1e-15);
  EXPECT_VEC_NEAR(r.col(1), rotate_vector(q, {0, 1, 0}), 1e-15);
  EXPECT_VEC_NEAR(r.col(2), rotate_vector(q, {0, 0, 1}), 1e-15);
}

TEST(QuatToMatrix, RandomIsOrthonormal) {
  Gen g(2);
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = quat_to_matrix(g.unit_quat());
    const Mat3 rtr = transpose(r) * r;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) ASSERT_NEAR(rtr(a, b), a == b ? 1.0 : 0.0, 1e-12);
    ASSERT_NEAR(determinant(r), 1.0, 1e-12);
  }
}

TEST(QuatToMatrix, EntriesClampedToUnitRange) {
  // Slightly over-length quaternion: unclamped the diagonal would exceed 1.
  const Mat3 r = quat_to_matrix({1.0 + 1e-9, 0.0, 0.0, 0.0});
  for (int k = 0; k < 9; ++k) {
    EXPECT_LE(r(k / 3, k % 3), 1.0);
    EXPECT_GE(r(k / 3, k % 3), -1.0);
  }
  EXPECT_EQ(r(0, 0), 1.0);
}

TEST(MatrixToQuat, Identity) {
  const MatToQuatResult r = matrix_to_quat_traced(Mat3::identity());
  EXPECT_EQ(r.branch, MatToQuatBranch::kTrace);
  EXPECT_QUAT_NEAR(r.q, Quat::identity(), 0.0);
}

TEST(MatrixToQuat, HalfTurnsSelectEachBranch) {
  struct Case {
    std::array<double, 3> diag;
    MatToQuatBranch branch;
    Quat q;
  };
  const Case cases[] = {
      {{-1, -1, 1}, MatToQuatBranch::kZ, {0, 0, 0, 1}},
      {{-1, 1, -1}, MatToQuatBranch::kY, {0, 0, 1, 0}},
      {{1, -1, -1}, MatToQuatBranch::kX, {0, 1, 0, 0}},
  };
  for (const Case& c : cases) {
    Mat3 m = Mat3::from_rows({c.diag[0], 0, 0}, {0, c.diag[1], 0}, {0, 0, c.diag[2]});
    const MatToQuatResult r = matrix_to_quat_traced(m);
    EXPECT_EQ(r.branch, c.branch);
    EXPECT_QUAT_NEAR(r.q, c.q, 1e-15);
  }
}

TEST(MatrixToQuat, BranchOrderOnTies) {
  // R33 == R22 > R11 with negative trace picks the z case.
  const Quat q = axis_angle({0.0, 1.0, 1.0}, kPi);
  EXPECT_EQ(matrix_to_quat_traced(quat_to_matrix(q)).branch, MatToQuatBranch::kZ);
}

TEST(MatrixToQuat, KnownRotation) {
  // 120 degrees about (1,1,1) permutes the axes: x -> y -> z -> x.
  const Mat3 m = Mat3::from_rows({0, 0, 1}, {1, 0, 0}, {0, 1, 0});
  EXPECT_QUAT_NEAR(matrix_to_quat(m), (Quat{0.5, 0.5, 0.5, 0.5}), 1e-15);
}

TEST(MatrixToQuat, RoundTripCoversAllBranches) {
  Gen g(3);
  std::array<int, 4> hits{};
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const Quat q = g.unit_quat();
    const MatToQuatResult r = matrix_to_quat_traced(quat_to_matrix(q));
    ++hits[static_cast<std::size_t>(r.branch)];
    worst = std::max(worst, testing::quat_distance(r.q, q));
  }
  EXPECT_LT(worst, 1e-12);
  for (int h : hits) EXPECT_GT(h, 0);
}

TEST(MatrixToQuat, NearOrthogonalInputIsNormalized) {
  Mat3 m = quat_to_matrix(axis_angle({1, 2, 3}, 0.7));
  m(0, 1) += 1e-10;
  m(2, 2) -= 1e-10;
  const Quat q = matrix_to_quat(m);
  EXPECT_NEAR(quat_norm(q), 1.0, 1e-15);
  const Mat3 back = quat_to_matrix(q);
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(back(k / 3, k % 3), m(k / 3, k % 3), 1e-9);
}

TEST(QuatAlgebra, InverseProperty) {
  Gen g(4);
  for (int i = 0; i < 1000; ++i) {
    const Quat q = g.unit_quat();
    EXPECT_QUAT_NEAR(q * quat_conjugate(q), Quat::identity(), 1e-15);
  }
}

TEST(QuatAlgebra, ZRotationComposition) {
  EXPECT_QUAT_NEAR(z_rotation(kPi / 2) * z_rotation(kPi / 2), z_rotation(kPi), 1e-15);
  EXPECT_QUAT_NEAR(z_rotation(0.3), (Quat{std::cos(0.15), 0, 0, std::sin(0.15)}), 0.0);
}

TEST(QuatAlgebra, Associativity) {
  Gen g(5);
  for (int i = 0; i < 1000; ++i) {
    const Quat a = g.unit_quat(), b = g.unit_quat(), c = g.unit_quat();
    EXPECT_QUAT_NEAR((a * b) * c, a * (b * c), 1e-12);
  }
}

TEST(QuatAlgebra, HamiltonConvention) {
  // i * j = k.
  EXPECT_EQ((Quat{0, 1, 0, 0} * Quat{0, 0, 1, 0}), (Quat{0, 0, 0, 1}));
  // Composition: rotating by a then b in body axes is a * b.
  const Quat a = axis_angle({0, 0, 1}, 0.4), b = axis_angle({1, 0, 0}, 0.9);
  const Vec3 v{0.2, -0.7, 0.4};
  EXPECT_VEC_NEAR(rotate_vector(a * b, v), rotate_vector(a, rotate_vector(b, v)), 1e-15);
}

TEST(QuatAlgebra, NormalizeRejectsNearZero) {
  EXPECT_THROW(quat_normalize({1e-13, 0, 0, 0}), DegenerateInputError);
  EXPECT_FALSE(try_quat_normalize({0, 0, 0, 0}).has_value());
  EXPECT_QUAT_NEAR(quat_normalize({2, 0, 0, 0}), Quat::identity(), 0.0);
  const Quat q = quat_normalize({1, 2, 3, 4});
  EXPECT_NEAR(quat_norm(q), 1.0, 1e-15);
}

TEST(QuatAlgebra, SameRotationIsSignAgnostic) {
  const Quat q = axis_angle({1, 0, 0}, 0.5);
  EXPECT_TRUE(same_rotation(q, -q, 1e-15));
  EXPECT_FALSE(same_rotation(q, Quat::identity(), 1e-3));
}

TEST(WrapAngle, CanonicalRange) {
  EXPECT_EQ(wrap_angle(kPi), kPi);
  EXPECT_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(-0.5 - 2 * kPi), -0.5, 1e-15);
  EXPECT_EQ(wrap_angle(0.0), 0.0);
}

TEST(FusedYaw, Basics) {
  EXPECT_EQ(fused_yaw(Quat::identity()), 0.0);
  for (double th : {-3.0, -1.0, 0.0, 0.5, 2.0, kPi}) EXPECT_NEAR(fused_yaw(z_rotation(th)), th, 1e-15);
  EXPECT_NEAR(fused_yaw({kHalfSqrt2, kHalfSqrt2, 0, 0}), 0.0, 1e-15);
}

TEST(FusedYaw, FrozenConstructiveValues) {
  // Tilt the body z axis back onto global z, then read the heading of x.
  struct Case {
    Quat q;
    double psi;
  };
  const Case cases[] = {
      {{0.8, 0.3, -0.2, 0.4}, 0.9272952180016121},
      {{0.1, 0.7, 0.5, -0.3}, -2.4980915447965084},
      {{-0.4, 0.2, 0.9, 0.6}, -1.9655874464946579},
      {{0.3, -0.6, 0.1, 0.2}, 1.1760052070951352},
  };
  for (const Case& c : cases) EXPECT_NEAR(fused_yaw(quat_normalize(c.q)), c.psi, 1e-14);
}

TEST(FusedYaw, UpsideDownIsSingular) {
  EXPECT_THROW(fused_yaw({0, 1, 0, 0}), SingularityError);
  EXPECT_THROW(fused_yaw(axis_angle({0.6, 0.8, 0.0}, kPi)), SingularityError);
  EXPECT_FALSE(try_fused_yaw({0, 0, 1, 0}).has_value());
  // Just outside the guard band.
  EXPECT_TRUE(try_fused_yaw(axis_angle({1, 0, 0}, kPi - 1e-6)).has_value());
}

TEST(FusedYaw, NegatesUnderInversion) {
  Gen g(6);
  for (int i = 0; i < 100000; ++i) {
    const Quat q = g.upright_quat();
    ASSERT_LT(testing::angle_distance(fused_yaw(quat_conjugate(q)), -fused_yaw(q)), 1e-12);
  }
}

TEST(FusedYaw, EqualsZyxYawOnPureZRotations) {
  Gen g(7);
  for (int i = 0; i < 1000; ++i) {
    const double th = g.uniform(-kPi, kPi);
    const Quat q = z_rotation(th);
    EXPECT_NEAR(fused_yaw(q), th, 1e-14);
    EXPECT_NEAR(zyx_yaw(q), th, 1e-14);
    EXPECT_NEAR(fused_yaw(q), zyx_yaw(q), 1e-14);
  }
}

TEST(ZyxYaw, Basics) {
  EXPECT_EQ(zyx_yaw(Quat::identity()), 0.0);
  for (double th : {-2.5, 0.25, 1.5, kPi}) EXPECT_NEAR(zyx_yaw(z_rotation(th)), th, 1e-15);
}

TEST(ZyxYaw, FrozenEulerValues) {
  const Quat q = quat_normalize({0.8, 0.3, -0.2, 0.4});
  EXPECT_NEAR(zyx_yaw(q), 0.7758746418038354, 1e-14);
  EXPECT_NEAR(zyx_pitch(q), -0.6461919994166938, 1e-14);
  EXPECT_NEAR(zyx_roll(q), 0.4455772869745818, 1e-14);
}

TEST(ZyxYaw, GimbalLock) {
  // A pitch of +-90 degrees puts body x on the global z axis.
  EXPECT_THROW(zyx_yaw(axis_angle({0, 1, 0}, kPi / 2)), SingularityError);
  EXPECT_THROW(zyx_yaw(axis_angle({0, 1, 0}, -kPi / 2)), SingularityError);
  EXPECT_FALSE(try_zyx_yaw(z_rotation(0.3) * axis_angle({0, 1, 0}, kPi / 2)).has_value());
  EXPECT_NEAR(zyx_pitch(axis_angle({0, 1, 0}, kPi / 2)), kPi / 2, 1e-7);
}

TEST(ZyxYaw, ProjectionCharacterization) {
  // ZYX yaw is the heading of the body x axis projected onto the global xy plane.
  Gen g(8);
  for (int i = 0; i < 10000; ++i) {
    const Quat q = g.unit_quat();
    const Vec3 xb = rotate_vector(q, {1, 0, 0});
    if (std::hypot(xb.x, xb.y) < 1e-6) continue;
    ASSERT_LT(testing::angle_distance(zyx_yaw(q), std::atan2(xb.y, xb.x)), 1e-12);
  }
}

TEST(RemoveFusedYaw, Basics) {
  EXPECT_QUAT_NEAR(remove_fused_yaw(z_rotation(1.2)), Quat::identity(), 1e-15);
  EXPECT_QUAT_NEAR(remove_fused_yaw(Quat::identity()), Quat::identity(), 0.0);
  EXPECT_THROW(remove_fused_yaw({0, 1, 0, 0}), SingularityError);
  EXPECT_FALSE(try_remove_fused_yaw({0, 0.6, 0.8, 0}).has_value());
}

TEST(RemoveFusedYaw, DecompositionAndIdempotence) {
  Gen g(9);
  for (int i = 0; i < 100000; ++i) {
    const Quat q = g.upright_quat();
    const Quat t = remove_fused_yaw(q);
    ASSERT_NEAR(quat_norm(t), 1.0, 1e-15);
    ASSERT_LT(std::abs(fused_yaw(t)), 1e-10);
    ASSERT_LT(testing::quat_distance(z_rotation(fused_yaw(q)) * t, q), 1e-10);
    ASSERT_LT(testing::quat_distance(remove_fused_yaw(t), t), 1e-12);
  }
}

}  // namespace
}  // namespace attest
