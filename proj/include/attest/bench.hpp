#pragma once

#include <cstddef>

#include "attest/resolution.hpp"

namespace attest {

struct BenchResult {
  ResolutionMethod method;
  std::size_t iterations = 0;
  double total_s = 0.0;
  double mean_ns = 0.0;
  double updates_per_s = 0.0;
};

/// Times AttitudeEstimator::update() on a fixed ring of synthetic frames
/// (full gyro, accelerometer and magnetometer data).
BenchResult benchmark_updates(ResolutionMethod method, std::size_t iterations);

}  // namespace attest
