#include "attest/bench.hpp"

#include <chrono>

#include "attest/estimator.hpp"
#include "attest/sim.hpp"

namespace attest {

namespace {
volatile double g_sink = 0.0;
}  // namespace

BenchResult benchmark_updates(ResolutionMethod method, std::size_t iterations) {
  sim::ScenarioParams params;
  params.name = "tumble";
  params.seed = 7;
  params.duration = 10.24;
  const sim::Scenario sc = sim::make_scenario(params);
  const std::vector<SensorFrame>& frames = sc.frames;

  FilterConfig config;
  config.method = method;
  config.calibration.mag_reference = sc.mag_reference;
  AttitudeEstimator est(config);
  const double dt = 1.0 / params.rate;

  // Warm up caches and branch predictors on one pass of the ring.
  for (const auto& f : frames) est.update(dt, f);

  double sink = 0.0;
  const std::size_t n = frames.size();
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0, k = 0; i < iterations; ++i) {
    est.update(dt, frames[k]);
    if (++k == n) k = 0;
    sink += est.attitude().w;
  }
  const auto stop = std::chrono::steady_clock::now();
  g_sink = sink;

  BenchResult r;
  r.method = method;
  r.iterations = iterations;
  r.total_s = std::chrono::duration<double>(stop - start).count();
  r.mean_ns = iterations ? 1e9 * r.total_s / static_cast<double>(iterations) : 0.0;
  r.updates_per_s = r.total_s > 0.0 ? static_cast<double>(iterations) / r.total_s : 0.0;
  return r;
}

}  // namespace attest
