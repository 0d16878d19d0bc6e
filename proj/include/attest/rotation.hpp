// Quaternion and rotation matrix algebra used throughout the estimator.
//
// Quaternion memory order is (w, x, y, z): the scalar part comes FIRST.
// Products follow the Hamilton convention, so q_AC = q_AB * q_BC and the
// kinematics read dq/dt = 0.5 * q * (0, omega) for body-frame rates omega.
//
// A rotation matrix R_AB holds the axes of frame B, expressed in the
// coordinates of frame A, as its columns (equivalently the axes of A in B
// coordinates as its rows), so that R_AB * v_B = v_A.
#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace attest {

inline constexpr double kSingularEps = 1e-9;
inline constexpr double kNormEps = 1e-12;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Throws DegenerateInputError if |v| <= kNormEps.
Vec3 normalized(const Vec3& v);

/// Quaternion in (w, x, y, z) order. Rotation-valued arguments are expected
/// to be of unit norm; use quat_normalize() at trust boundaries.
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }
  constexpr Vec3 vec() const { return {x, y, z}; }
  constexpr Quat operator-() const { return {-w, -x, -y, -z}; }
  constexpr bool operator==(const Quat&) const = default;
};

constexpr double quat_dot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double quat_norm(const Quat& q) { return std::sqrt(quat_dot(q, q)); }

constexpr Quat quat_multiply(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
constexpr Quat operator*(const Quat& a, const Quat& b) { return quat_multiply(a, b); }
constexpr Quat quat_conjugate(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }

// Throws DegenerateInputError if |q| <= kNormEps.
Quat quat_normalize(const Quat& q);
std::optional<Quat> try_quat_normalize(const Quat& q) noexcept;

/// Rotation by psi about the global z-axis: (cos psi/2, 0, 0, sin psi/2).
Quat z_rotation(double psi);
/// Rotation by angle about a (not necessarily unit) axis; identity if the axis is zero.
Quat axis_angle(const Vec3& axis, double angle);

/// Sign-agnostic equality: true if q1 ~ q2 or q1 ~ -q2 within tol per component.
bool same_rotation(const Quat& q1, const Quat& q2, double tol);

/// L_q(v) = q v q*, evaluated as v + w t + q_vec x t with t = 2 (q_vec x v).
constexpr Vec3 rotate_vector(const Quat& q, const Vec3& v) {
  const Vec3 qv = q.vec();
  const Vec3 t = 2.0 * cross(qv, v);
  return v + q.w * t + cross(qv, t);
}

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};

  static constexpr Mat3 identity() { return {}; }
  static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    return {{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
  }
  constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
  constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  constexpr Vec3 row(int r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }
  constexpr Vec3 col(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }
  constexpr double trace() const { return m[0] + m[4] + m[8]; }
};

constexpr Vec3 operator*(const Mat3& a, const Vec3& v) { return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)}; }
Mat3 operator*(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);

/// Standard expansion; each entry is clamped to [-1, 1].
Mat3 quat_to_matrix(const Quat& q);

/// Which of the four conversion bases was used, in evaluation order.
enum class MatToQuatBranch { kTrace = 0, kZ = 1, kY = 2, kX = 3 };

struct MatToQuatResult {
  Quat q;
  MatToQuatBranch branch;
};

/// Four-case conversion; the result is normalized but its sign is NOT canonical.
MatToQuatResult matrix_to_quat_traced(const Mat3& r) noexcept;
inline Quat matrix_to_quat(const Mat3& r) noexcept { return matrix_to_quat_traced(r).q; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Fused yaw of q, in (-pi, pi]. Throws SingularityError when the body z-axis
/// is antiparallel to the global z-axis.
double fused_yaw(const Quat& q);
std::optional<double> try_fused_yaw(const Quat& q) noexcept;

/// Z angle of the ZYX Euler decomposition, in (-pi, pi]. Throws
/// SingularityError in gimbal lock (body x-axis collinear with global z).
double zyx_yaw(const Quat& q);
std::optional<double> try_zyx_yaw(const Quat& q) noexcept;

/// ZYX Euler pitch in [-pi/2, pi/2] and roll in (-pi, pi]. Roll is arbitrary in gimbal lock.
double zyx_pitch(const Quat& q);
double zyx_roll(const Quat& q);

/// normalize((w, 0, 0, -z) * q). Throws SingularityError like fused_yaw().
Quat remove_fused_yaw(const Quat& q);
std::optional<Quat> try_remove_fused_yaw(const Quat& q) noexcept;

}  // namespace attest
