#include "attest/resolution.hpp"

namespace attest {

namespace {

// Rows are the global x, y and z axes expressed in body coordinates, so the
// matrix is R_GB with R_GB * v_B = v_G.
Quat quat_from_axes(const Vec3& x_tilde, double nx_sq, const Vec3& y_tilde, double ny_sq, const Vec3& up) {
  const Vec3 xg = x_tilde * (1.0 / std::sqrt(nx_sq));
  const Vec3 yg = y_tilde * (1.0 / std::sqrt(ny_sq));
  return matrix_to_quat(Mat3::from_rows(xg, yg, up));
}

// Same, for x_tilde and y_tilde of equal length (one perpendicular to up, the other their cross product).
Quat quat_from_equal_axes(const Vec3& x_tilde, const Vec3& y_tilde, double n_sq, const Vec3& up) {
  const double inv = 1.0 / std::sqrt(n_sq);
  return matrix_to_quat(Mat3::from_rows(x_tilde * inv, y_tilde * inv, up));
}

ResolutionOutcome resolve_zxy_yaw(const Vec3& up, const Quat& q) {
  // Half of the global y-axis in body coordinates according to q_hat.
  const Vec3 y_h{q.x * q.y + q.w * q.z, 0.5 - q.x * q.x - q.z * q.z, q.y * q.z - q.w * q.x};
  const Vec3 y_tilde = y_h - dot(y_h, up) * up;
  const Vec3 x_tilde = cross(y_tilde, up);
  const double ny = norm_sq(y_tilde);
  const double nx = norm_sq(x_tilde);
  if (ny <= kSingularEps * kSingularEps || nx <= kSingularEps * kSingularEps) {
    // Only reachable for a non-unit q_hat; zero the ZXY yaw of the up vector alone.
    const Vec3 ex{1.0, 0.0, 0.0};
    const Vec3 ey{0.0, 1.0, 0.0};
    const Vec3 base = std::abs(dot(ex, up)) < 0.5 ? ex : ey;
    const Vec3 xt = base - dot(base, up) * up;
    const Vec3 yt = cross(up, xt);
    return {quat_from_axes(xt, norm_sq(xt), yt, norm_sq(yt), up), ResolutionPath::kFallbackZxy};
  }
  return {quat_from_axes(x_tilde, nx, y_tilde, ny, up), ResolutionPath::kFallbackZxy};
}

}  // namespace

ResolutionOutcome resolve_zyx_yaw(const Vec3& up, const Quat& q) noexcept {
  // Half of the global x-axis in body coordinates according to q_hat; the
  // factor of one half is absorbed by the normalization.
  const Vec3 x_h{0.5 - q.y * q.y - q.z * q.z, q.x * q.y - q.w * q.z, q.x * q.z + q.w * q.y};
  const Vec3 x_tilde = x_h - dot(x_h, up) * up;
  const Vec3 y_tilde = cross(up, x_tilde);
  const double nx = norm_sq(x_tilde);
  const double ny = norm_sq(y_tilde);
  if (nx <= kSingularEps || ny <= kSingularEps) return resolve_zxy_yaw(up, q);
  return {quat_from_equal_axes(x_tilde, y_tilde, nx, up), ResolutionPath::kPrimary};
}

ResolutionOutcome resolve_fused_yaw(const Vec3& up, const Quat& q) noexcept {
  const Vec3 zg = rotate_vector(q, up);
  const double a = 1.0 + zg.z;
  if (a <= kSingularEps) {
    ResolutionOutcome out = resolve_zyx_yaw(up, q);
    if (out.path == ResolutionPath::kPrimary) out.path = ResolutionPath::kFallbackZyx;
    return out;
  }
  // [ a   -zy   zx    0 ]
  // [ zy   a    0   -zx ]
  // [-zx   0    a   -zy ]   applied to (w, x, y, z)
  // [ 0    zx   zy    a ]
  const Quat qb{a * q.w - zg.y * q.x + zg.x * q.y,
                zg.y * q.w + a * q.x - zg.x * q.z,
                -zg.x * q.w + a * q.y - zg.y * q.z,
                zg.x * q.x + zg.y * q.y + a * q.z};
  // |qb| = sqrt(2a) for unit q_hat, bounded away from zero by the check above.
  const double inv = 1.0 / quat_norm(qb);
  return {{qb.w * inv, qb.x * inv, qb.y * inv, qb.z * inv}, ResolutionPath::kPrimary};
}

ResolutionOutcome resolve_magnetometer(const Vec3& up, const Vec3& mag, const Vec3& mag_reference,
                                       const Quat& q_hat, ResolutionMethod fallback) noexcept {
  const double mex = mag_reference.x;
  const double mey = mag_reference.y;
  const Vec3 m_hat = mag - dot(mag, up) * up;
  const double nm = norm_sq(m_hat);
  const double ne = mex * mex + mey * mey;
  // Relative to |mag|^2 so that the field need not be normalized.
  if (nm > kSingularEps * norm_sq(mag) && ne > kSingularEps) {
    const Vec3 u_hat = cross(m_hat, up);
    const Vec3 x_tilde = mex * m_hat + mey * u_hat;
    const Vec3 y_tilde = mey * m_hat - mex * u_hat;
    const double nx = norm_sq(x_tilde);
    const double ny = norm_sq(y_tilde);
    if (nx > kSingularEps * kSingularEps && ny > kSingularEps * kSingularEps)
      return {quat_from_equal_axes(x_tilde, y_tilde, nx, up), ResolutionPath::kPrimary};
  }
  ResolutionOutcome out;
  if (fallback == ResolutionMethod::kZyxYaw) {
    out = resolve_zyx_yaw(up, q_hat);
    if (out.path == ResolutionPath::kPrimary) out.path = ResolutionPath::kFallbackZyx;
  } else {
    out = resolve_fused_yaw(up, q_hat);
    if (out.path == ResolutionPath::kPrimary) out.path = ResolutionPath::kFallbackFused;
  }
  return out;
}

ResolutionOutcome resolve(ResolutionMethod method, const Vec3& up, const Vec3* mag, const Vec3& mag_reference,
                          const Quat& q_hat, ResolutionMethod fallback) noexcept {
  switch (method) {
    case ResolutionMethod::kMagnetometer:
      if (mag) return resolve_magnetometer(up, *mag, mag_reference, q_hat, fallback);
      return resolve_magnetometer(up, Vec3{}, mag_reference, q_hat, fallback);
    case ResolutionMethod::kZyxYaw:
      return resolve_zyx_yaw(up, q_hat);
    case ResolutionMethod::kFusedYaw:
      break;
  }
  return resolve_fused_yaw(up, q_hat);
}

const char* to_string(ResolutionMethod m) noexcept {
  switch (m) {
    case ResolutionMethod::kMagnetometer:
      return "mag";
    case ResolutionMethod::kZyxYaw:
      return "zyx";
    case ResolutionMethod::kFusedYaw:
      return "fused";
  }
  return "?";
}

const char* to_string(ResolutionPath p) noexcept {
  switch (p) {
    case ResolutionPath::kPrimary:
      return "primary";
    case ResolutionPath::kFallbackFused:
      return "fallback_fused";
    case ResolutionPath::kFallbackZyx:
      return "fallback_zyx";
    case ResolutionPath::kFallbackZxy:
      return "fallback_zxy";
  }
  return "?";
}

}  // namespace attest
