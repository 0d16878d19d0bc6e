#include "attest/rotation.hpp"

#include <algorithm>
#include <numbers>

#include "attest/error.hpp"

namespace attest {

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > kNormEps)) throw DegenerateInputError("cannot normalize a zero-length vector");
  return v * (1.0 / n);
}

std::optional<Quat> try_quat_normalize(const Quat& q) noexcept {
  const double n = quat_norm(q);
  if (!(n > kNormEps)) return std::nullopt;
  const double s = 1.0 / n;
  return Quat{q.w * s, q.x * s, q.y * s, q.z * s};
}

Quat quat_normalize(const Quat& q) {
  if (auto r = try_quat_normalize(q)) return *r;
  throw DegenerateInputError("cannot normalize a zero-norm quaternion");
}

Quat z_rotation(double psi) { return {std::cos(0.5 * psi), 0.0, 0.0, std::sin(0.5 * psi)}; }

Quat axis_angle(const Vec3& axis, double angle) {
  const double n = norm(axis);
  if (!(n > kNormEps)) return Quat::identity();
  const double s = std::sin(0.5 * angle) / n;
  return {std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s};
}

bool same_rotation(const Quat& q1, const Quat& q2, double tol) {
  auto close = [tol](const Quat& a, const Quat& b) {
    return std::abs(a.w - b.w) <= tol && std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol &&
           std::abs(a.z - b.z) <= tol;
  };
  return close(q1, q2) || close(q1, -q2);
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

double determinant(const Mat3& a) { return dot(a.row(0), cross(a.row(1), a.row(2))); }

Mat3 quat_to_matrix(const Quat& q) {
  const double xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
  const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
  const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
  Mat3 r{{1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy),
          2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx),
          2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)}};
  for (double& e : r.m) e = std::clamp(e, -1.0, 1.0);
  return r;
}

MatToQuatResult matrix_to_quat_traced(const Mat3& R) noexcept {
  // R(i-1, j-1) is R_ij in the one-based notation of the classic algorithm.
  Quat q;
  MatToQuatBranch branch;
  const double tr = R.trace();
  if (tr >= 0.0) {
    const double r = std::sqrt(1.0 + tr);
    const double s = 0.5 / r;
    q = {0.5 * r, s * (R(2, 1) - R(1, 2)), s * (R(0, 2) - R(2, 0)), s * (R(1, 0) - R(0, 1))};
    branch = MatToQuatBranch::kTrace;
  } else if (R(2, 2) >= R(1, 1) && R(2, 2) >= R(0, 0)) {
    const double r = std::sqrt(1.0 - R(0, 0) - R(1, 1) + R(2, 2));
    const double s = 0.5 / r;
    q = {s * (R(1, 0) - R(0, 1)), s * (R(0, 2) + R(2, 0)), s * (R(2, 1) + R(1, 2)), 0.5 * r};
    branch = MatToQuatBranch::kZ;
  } else if (R(1, 1) >= R(0, 0)) {
    const double r = std::sqrt(1.0 - R(0, 0) + R(1, 1) - R(2, 2));
    const double s = 0.5 / r;
    q = {s * (R(0, 2) - R(2, 0)), s * (R(1, 0) + R(0, 1)), 0.5 * r, s * (R(2, 1) + R(1, 2))};
    branch = MatToQuatBranch::kY;
  } else {
    const double r = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2));
    const double s = 0.5 / r;
    q = {s * (R(2, 1) - R(1, 2)), 0.5 * r, s * (R(1, 0) + R(0, 1)), s * (R(0, 2) + R(2, 0))};
    branch = MatToQuatBranch::kX;
  }
  // Each branch has r >= 1/2 for near-SO(3) input, so the norm is never close to zero.
  const double inv = 1.0 / quat_norm(q);
  return {{q.w * inv, q.x * inv, q.y * inv, q.z * inv}, branch};
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

namespace {

// |L_q(e_z) - (0,0,-1)| = 2 sqrt(w^2 + z^2) for unit q.
bool fused_yaw_singular(const Quat& q) { return 2.0 * std::sqrt(q.w * q.w + q.z * q.z) <= kSingularEps; }

}  // namespace

std::optional<double> try_fused_yaw(const Quat& q) noexcept {
  if (fused_yaw_singular(q)) return std::nullopt;
  return wrap_angle(2.0 * std::atan2(q.z, q.w));
}

double fused_yaw(const Quat& q) {
  if (auto r = try_fused_yaw(q)) return *r;
  throw SingularityError("fused yaw is undefined: body z-axis antiparallel to global z-axis");
}

std::optional<double> try_zyx_yaw(const Quat& q) noexcept {
  // Projection of the body x-axis onto the global xy-plane.
  const double px = 1.0 - 2.0 * (q.y * q.y + q.z * q.z);
  const double py = 2.0 * (q.x * q.y + q.w * q.z);
  if (std::hypot(px, py) < kSingularEps) return std::nullopt;
  return wrap_angle(std::atan2(py, px));
}

double zyx_yaw(const Quat& q) {
  if (auto r = try_zyx_yaw(q)) return *r;
  throw SingularityError("ZYX yaw is undefined in gimbal lock");
}

double zyx_pitch(const Quat& q) {
  return std::asin(std::clamp(2.0 * (q.w * q.y - q.x * q.z), -1.0, 1.0));
}

double zyx_roll(const Quat& q) {
  return wrap_angle(std::atan2(2.0 * (q.w * q.x + q.y * q.z), 1.0 - 2.0 * (q.x * q.x + q.y * q.y)));
}

std::optional<Quat> try_remove_fused_yaw(const Quat& q) noexcept {
  if (fused_yaw_singular(q)) return std::nullopt;
  return try_quat_normalize(quat_multiply({q.w, 0.0, 0.0, -q.z}, q));
}

Quat remove_fused_yaw(const Quat& q) {
  if (auto r = try_remove_fused_yaw(q)) return *r;
  throw SingularityError("cannot remove fused yaw: body z-axis antiparallel to global z-axis");
}

}  // namespace attest
