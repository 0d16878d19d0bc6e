// Reconstruction of an instantaneous measured orientation q_y (global to
// body) from the measured up vector, optionally a magnetometer direction,
// and the current estimate q_hat.
//
// Every path produces a q_y that reproduces the measured up vector exactly:
// rotate_vector(conj(q_y), {0, 0, 1}) == up. The magnetometer and the yaw
// assumptions therefore only ever affect the yaw of q_y.
#pragma once

#include "attest/rotation.hpp"

namespace attest {

enum class ResolutionMethod { kMagnetometer, kZyxYaw, kFusedYaw };

/// Which algorithm actually produced q_y.
enum class ResolutionPath {
  kPrimary,        ///< the requested method succeeded
  kFallbackFused,  ///< magnetometer unusable, fused yaw method used
  kFallbackZyx,    ///< ZYX yaw method used as a fallback
  kFallbackZxy,    ///< ZYX yaw singular, ZXY yaw method used
};

struct ResolutionOutcome {
  Quat q_y;
  ResolutionPath path = ResolutionPath::kPrimary;
};

/// Minimises the heading discrepancy between the measured field and the
/// reference field. `mag` may have any positive length. Falls back to `fallback` (kZyxYaw or kFusedYaw) if the
/// field projection or the reference's xy-projection is degenerate.
ResolutionOutcome resolve_magnetometer(const Vec3& up, const Vec3& mag, const Vec3& mag_reference,
                                       const Quat& q_hat,
                                       ResolutionMethod fallback = ResolutionMethod::kFusedYaw) noexcept;

/// q_y with zero ZYX yaw relative to q_hat; ZXY yaw is zeroed instead when
/// the relative rotation is in ZYX gimbal lock.
ResolutionOutcome resolve_zyx_yaw(const Vec3& up, const Quat& q_hat) noexcept;

/// q_y with zero fused yaw relative to q_hat. Uses a direct quaternion
/// formula (no matrix conversion); falls back to resolve_zyx_yaw() when the
/// relative tilt is exactly pi.
ResolutionOutcome resolve_fused_yaw(const Vec3& up, const Quat& q_hat) noexcept;

/// Dispatch on `method`. `mag` may be null, which forces the magnetometer method to its fallback.
ResolutionOutcome resolve(ResolutionMethod method, const Vec3& up, const Vec3* mag, const Vec3& mag_reference,
                          const Quat& q_hat, ResolutionMethod fallback = ResolutionMethod::kFusedYaw) noexcept;

const char* to_string(ResolutionMethod m) noexcept;
const char* to_string(ResolutionPath p) noexcept;

}  // namespace attest
