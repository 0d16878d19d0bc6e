// attest: replay sensor logs, run simulated experiments and benchmark the
// estimator from the command line.
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attest/attest.h"
#include "log_csv.hpp"

namespace {

using attest_cli::AccMode;
using attest_cli::fmt;
using attest_cli::MagInput;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimatorOptions {
  std::string method = "fused";
  std::string fallback = "fused";
  double kp = 0.0, ki = 0.0, kp_quick = 0.0, ki_quick = 0.0;
  double ql_time = 0.0;
  double nominal_dt = 0.0;
  std::string mag_ref;  // "x,y"; empty keeps the default
  std::string acc_mode = "3d";
  std::string mag_mode = "3d";
  bool no_ql = false;
  double ql_trigger = std::numeric_limits<double>::quiet_NaN();

  EstimatorOptions() {
    attest_config c;
    attest_config_default(&c);
    kp = c.kp;
    ki = c.ki;
    kp_quick = c.kp_quick;
    ki_quick = c.ki_quick;
    ql_time = c.quick_learn_time;
    nominal_dt = c.nominal_dt;
  }
};

void add_estimator_options(CLI::App& app, EstimatorOptions& o) {
  app.add_option("--method", o.method, "Orientation resolution method")
      ->check(CLI::IsMember({"mag", "zyx", "fused"}));
  app.add_option("--fallback", o.fallback, "Method used when the magnetometer is unusable")
      ->check(CLI::IsMember({"zyx", "fused"}));
  app.add_option("--kp", o.kp, "Nominal proportional gain");
  app.add_option("--ki", o.ki, "Nominal integral gain");
  app.add_option("--kp-quick", o.kp_quick, "Quick learning proportional gain");
  app.add_option("--ki-quick", o.ki_quick, "Quick learning integral gain");
  app.add_option("--ql-time", o.ql_time, "Quick learning time in seconds");
  app.add_option("--nominal-dt", o.nominal_dt, "Nominal update period in seconds");
  app.add_option("--mag-ref", o.mag_ref, "Magnetic reference field x,y in global coordinates");
  app.add_option("--acc-mode", o.acc_mode, "Accelerometer channels")->check(CLI::IsMember({"3d", "xy"}));
  app.add_option("--mag-mode", o.mag_mode, "Magnetometer channels")
      ->check(CLI::IsMember({"3d", "xy", "heading", "none"}));
  app.add_flag("--no-ql", o.no_ql, "Disable quick learning at start");
  app.add_option("--ql-trigger", o.ql_trigger, "Restart quick learning at this time (s)");
}

attest_method parse_method(const std::string& s) {
  if (s == "mag") return ATTEST_METHOD_MAGNETOMETER;
  if (s == "zyx") return ATTEST_METHOD_ZYX_YAW;
  return ATTEST_METHOD_FUSED_YAW;
}

attest_vec3 parse_mag_ref(const std::string& s) {
  const auto comma = s.find(',');
  double v[2] = {0.0, 0.0};
  bool ok = comma != std::string::npos;
  for (int i = 0; ok && i < 2; ++i) {
    const char* b = s.data() + (i == 0 ? 0 : comma + 1);
    const char* e = i == 0 ? s.data() + comma : s.data() + s.size();
    const auto [p, ec] = std::from_chars(b, e, v[i]);
    ok = ec == std::errc() && p == e && std::isfinite(v[i]);
  }
  if (!ok) throw UsageError("--mag-ref expects x,y, got '" + s + "'");
  return {v[0], v[1], 0.0};
}

struct EstimatorDeleter {
  void operator()(attest_estimator* e) const { attest_estimator_destroy(e); }
};

struct Instance {
  std::string label;
  attest_config config{};
  AccMode acc_mode = AccMode::k3d;
  MagInput mag_mode = MagInput::k3d;
  double ql_trigger = std::numeric_limits<double>::quiet_NaN();
  bool triggered = false;
  std::unique_ptr<attest_estimator, EstimatorDeleter> handle;
};

Instance make_instance(const std::string& label, const EstimatorOptions& o, const attest_vec3* default_mag_ref) {
  Instance inst;
  inst.label = label;
  attest_config& c = inst.config;
  attest_config_default(&c);
  c.method = parse_method(o.method);
  c.mag_fallback = parse_method(o.fallback);
  c.kp = o.kp;
  c.ki = o.ki;
  c.kp_quick = o.kp_quick;
  c.ki_quick = o.ki_quick;
  c.quick_learn_time = o.ql_time;
  c.quick_learn_on_start = !o.no_ql;
  c.nominal_dt = o.nominal_dt;
  if (!o.mag_ref.empty()) {
    c.mag_reference = parse_mag_ref(o.mag_ref);
  } else if (default_mag_ref) {
    c.mag_reference = *default_mag_ref;
  }
  inst.acc_mode = o.acc_mode == "xy" ? AccMode::kXy : AccMode::k3d;
  if (o.mag_mode == "xy") {
    inst.mag_mode = MagInput::kXy;
  } else if (o.mag_mode == "heading") {
    inst.mag_mode = MagInput::kHeading;
  } else if (o.mag_mode == "none") {
    inst.mag_mode = MagInput::kNone;
  }
  inst.ql_trigger = o.ql_trigger;
  attest_estimator* raw = nullptr;
  if (attest_estimator_create(&c, &raw) != ATTEST_OK)
    throw UsageError("estimator '" + label + "': " + attest_last_error());
  inst.handle.reset(raw);
  return inst;
}

/// Builds the estimator list from the global options and the --estimator groups.
std::vector<Instance> make_instances(const EstimatorOptions& base, const std::vector<std::string>& groups,
                                     const attest_vec3* default_mag_ref) {
  std::vector<Instance> out;
  if (groups.empty()) {
    out.push_back(make_instance(base.method, base, default_mag_ref));
    return out;
  }
  std::set<std::string> labels;
  for (const std::string& g : groups) {
    const auto colon = g.find(':');
    const std::string label = g.substr(0, colon);
    if (label.empty() || label.find_first_of(", \t\"") != std::string::npos)
      throw UsageError("invalid estimator label in '" + g + "'");
    if (!labels.insert(label).second) throw UsageError("duplicate estimator label '" + label + "'");
    EstimatorOptions o = base;
    CLI::App sub{"estimator " + label};
    add_estimator_options(sub, o);
    try {
      sub.parse(colon == std::string::npos ? std::string() : g.substr(colon + 1), false);
    } catch (const CLI::ParseError& e) {
      throw UsageError("estimator '" + label + "': " + e.what());
    }
    out.push_back(make_instance(label, o, default_mag_ref));
  }
  return out;
}

void check(attest_status s) {
  if (s != ATTEST_OK) throw RuntimeFailure(attest_last_error());
}

// The frame as seen by one instance, given a full-information frame.
attest_frame restrict_frame(attest_frame f, const Instance& inst) {
  if (inst.acc_mode == AccMode::kXy) f.acc_z_valid = 0;
  if (f.mag_mode != ATTEST_MAG_FULL3D) return f;
  switch (inst.mag_mode) {
    case MagInput::k3d:
      break;
    case MagInput::kXy:
      f.mag.z = 0.0;
      f.mag_mode = ATTEST_MAG_XY_ONLY;
      break;
    case MagInput::kHeading:
      f.heading = std::atan2(f.mag.y, f.mag.x);
      f.mag_mode = ATTEST_MAG_HEADING_ONLY;
      break;
    case MagInput::kNone:
      f.mag_mode = ATTEST_MAG_ABSENT;
      break;
  }
  return f;
}

void step(Instance& inst, double dt, const attest_frame& f) {
  if (!inst.triggered && f.t >= inst.ql_trigger) {
    check(attest_estimator_trigger_quick_learning(inst.handle.get()));
    inst.triggered = true;
  }
  check(attest_estimator_update(inst.handle.get(), dt, &f));
}

constexpr const char* kEstimateColumns =
    "label,t,qw,qx,qy,qz,fused_yaw,zyx_yaw,pitch,roll,bx,by,bz,lambda,path";

void write_estimate(std::ostream& out, const Instance& inst, double t) {
  attest_state s;
  check(attest_estimator_get_state(inst.handle.get(), &s));
  const attest_quat& q = s.attitude;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double fused = nan, zyx = nan, pitch = nan, roll = nan;
  if (attest_fused_yaw(q, &fused) != ATTEST_OK) fused = nan;
  if (attest_zyx_yaw(q, &zyx) != ATTEST_OK) zyx = nan;
  check(attest_zyx_pitch_roll(q, &pitch, &roll));
  out << inst.label << ',' << fmt(t) << ',' << fmt(q.w) << ',' << fmt(q.x) << ',' << fmt(q.y) << ','
      << fmt(q.z) << ',' << fmt(fused) << ',' << fmt(zyx) << ',' << fmt(pitch) << ',' << fmt(roll) << ','
      << fmt(s.bias.x) << ',' << fmt(s.bias.y) << ',' << fmt(s.bias.z) << ',' << fmt(s.lambda) << ','
      << (s.correction_applied ? attest_path_name(s.path) : "none");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw RuntimeFailure("cannot open output file '" + path + "'");
  f << text;
  if (!f.flush()) throw RuntimeFailure("write to '" + path + "' failed");
}

int run_replay(const std::string& input, const EstimatorOptions& base, const std::vector<std::string>& groups,
               const std::string& out_path) {
  std::vector<attest_cli::LogRow> rows;
  try {
    if (input == "-") {
      rows = attest_cli::read_log(std::cin);
    } else {
      std::ifstream f(input);
      if (!f) throw UsageError("cannot open input file '" + input + "'");
      rows = attest_cli::read_log(f);
    }
  } catch (const attest_cli::ParseError& e) {
    throw UsageError(input + ": " + e.what());
  }
  if (rows.empty()) throw UsageError(input + ": no data rows");
  std::vector<Instance> insts = make_instances(base, groups, nullptr);

  std::ostringstream out;
  out << kEstimateColumns << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Instance& inst : insts) {
      const double dt = i == 0 ? inst.config.nominal_dt : rows[i].t - rows[i - 1].t;
      step(inst, dt, attest_cli::to_frame(rows[i], inst.acc_mode, inst.mag_mode));
      write_estimate(out, inst, rows[i].t);
      out << '\n';
    }
  }
  emit(out_path, out.str());
  return 0;
}

struct ScenarioDeleter {
  void operator()(attest_scenario* s) const { attest_scenario_destroy(s); }
};

int run_simulate(const std::string& scenario, std::uint64_t seed, double duration, double rate, bool ideal,
                 const EstimatorOptions& base, const std::vector<std::string>& groups, const std::string& out_path) {
  attest_scenario_params p;
  attest_scenario_params_default(&p);
  p.name = scenario.c_str();
  p.seed = seed;
  p.duration = duration;
  p.rate = rate;
  p.ideal = ideal;
  attest_scenario* raw = nullptr;
  if (attest_scenario_create(&p, &raw) != ATTEST_OK) throw UsageError(attest_last_error());
  std::unique_ptr<attest_scenario, ScenarioDeleter> sc(raw);
  attest_vec3 mag_ref;
  check(attest_scenario_mag_reference(sc.get(), &mag_ref));
  std::vector<Instance> insts = make_instances(base, groups, &mag_ref);

  std::ostringstream out;
  out << kEstimateColumns << ",tqw,tqx,tqy,tqz,err\n";
  const std::size_t n = attest_scenario_size(sc.get());
  double t_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    attest_frame f;
    attest_quat truth;
    check(attest_scenario_frame(sc.get(), i, &f));
    check(attest_scenario_truth(sc.get(), i, &truth));
    for (Instance& inst : insts) {
      const double dt = i == 0 ? inst.config.nominal_dt : f.t - t_prev;
      step(inst, dt, restrict_frame(f, inst));
      attest_state s;
      check(attest_estimator_get_state(inst.handle.get(), &s));
      double err = 0.0;
      check(attest_attitude_error_angle(truth, s.attitude, &err));
      write_estimate(out, inst, f.t);
      out << ',' << fmt(truth.w) << ',' << fmt(truth.x) << ',' << fmt(truth.y) << ',' << fmt(truth.z) << ','
          << fmt(err) << '\n';
    }
    t_prev = f.t;
  }
  emit(out_path, out.str());
  return 0;
}

int run_bench(const std::string& method, std::size_t iterations, const std::string& out_path) {
  std::vector<std::string> methods;
  if (method == "all") {
    methods = {"fused", "mag", "zyx"};
  } else {
    methods = {method};
  }
  std::ostringstream out;
  for (const std::string& m : methods) {
    attest_bench_result r;
    check(attest_bench(parse_method(m), iterations, &r));
    out << "method=" << m << " iterations=" << r.iterations << " mean_ns=" << fmt(r.mean_ns)
        << " updates_per_s=" << fmt(r.updates_per_s) << '\n';
  }
  emit(out_path, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attitude estimation from gyroscope, accelerometer and magnetometer data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", attest_version());

  EstimatorOptions base;
  std::vector<std::string> groups;
  std::string out_path;

  auto* replay = app.add_subcommand("replay", "Run estimators over a sensor log");
  std::string input;
  replay->add_option("input", input, "Sensor log CSV ('-' for stdin)")->required();
  add_estimator_options(*replay, base);
  replay->add_option("--estimator", groups, "Parallel instance 'label:flags'");
  replay->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  auto* simulate = app.add_subcommand("simulate", "Run estimators on a simulated scenario");
  std::string scenario = "static";
  std::uint64_t seed = 0;
  double duration = 0.0;
  double rate = 100.0;
  bool ideal = false;
  simulate->add_option("--scenario", scenario, "Scenario name")
      ->check(CLI::IsMember({"static", "static-random", "step", "const-rate", "sinusoid", "wobble", "tumble", "fig1",
                             "fig2"}));
  simulate->add_option("--seed", seed, "Noise and scenario seed");
  simulate->add_option("--duration", duration, "Duration in seconds (scenario default if omitted)");
  simulate->add_option("--rate", rate, "Sample rate in Hz");
  simulate->add_flag("--ideal", ideal, "Disable sensor bias, noise and faults");
  add_estimator_options(*simulate, base);
  simulate->add_option("--estimator", groups, "Parallel instance 'label:flags'");
  simulate->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  auto* bench = app.add_subcommand("bench", "Measure the cost of one estimator update");
  std::string bench_method = "all";
  std::size_t iterations = 1000000;
  bench->add_option("--method", bench_method, "Method to time")->check(CLI::IsMember({"mag", "zyx", "fused", "all"}));
  bench->add_option("--iterations", iterations, "Updates per method")
      ->check(CLI::Range(std::size_t{1000000}, std::numeric_limits<std::size_t>::max()));
  bench->add_option("--out", out_path, "Report file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (replay->parsed()) return run_replay(input, base, groups, out_path);
    if (simulate->parsed()) return run_simulate(scenario, seed, duration, rate, ideal, base, groups, out_path);
    return run_bench(bench_method, iterations, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
