#include "muscu/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "muscu/error.hpp"
#include "muscu/integrate.hpp"
#include "muscu/verify.hpp"

namespace muscu::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string interval_text(const AngleInterval& i) {
  return "(" + num(i.lo) + ", " + num(i.hi) + ")" + (i.empty() ? " [empty]" : "");
}

std::string segment_label(SegmentId id) {
  return "(" + std::to_string(id.muscle) + "," + std::to_string(id.segment) + ")";
}

void write_echo(std::ostream& csv, const ScenarioConfig& cfg) { csv << "# config: " << config_echo(cfg) << '\n'; }

void warn_if_unrealizable(const InternalForce& v, std::ostream& err) {
  if (!v.realizable())
    err << "warning: balanced tensions (" << num(v.v1) << ", " << num(v.v2)
        << ") N are not both positive; theta_d is outside the tension window and the\n"
           "         unclamped equation of motion is used as is\n";
}

std::size_t thread_budget(std::size_t requested, std::size_t rows) {
  std::size_t n = requested;
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MUSCU_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap > 0)
        n = std::min(n, static_cast<std::size_t>(cap));
    }
  }
  return std::max<std::size_t>(1, std::min(n, rows));
}

const char* const kGeometryKeys[] = {"L0", "L1", "b1", "b2", "d1", "d2", "ell1", "ell2", "r1", "r2", "s1", "s2"};
const char* const kDynamicsScalars[] = {"inertia", "viscosity", "gain", "epsilon"};
const char* const kDynamicsAngles[] = {"theta_d", "theta_min", "theta_max"};

bool one_of(const std::string& name, std::span<const char* const> keys) {
  return std::any_of(keys.begin(), keys.end(), [&](const char* k) { return name == k; });
}

bool sweepable(const std::string& name) {
  return one_of(name, kGeometryKeys) || one_of(name, kDynamicsScalars) || one_of(name, kDynamicsAngles) ||
         name == "theta0";
}

void apply(nlohmann::json& doc, const std::string& param, double value) {
  if (one_of(param, kGeometryKeys))
    doc["geometry"][param] = value;
  else if (one_of(param, kDynamicsScalars))
    doc["dynamics"][param] = value;
  else if (one_of(param, kDynamicsAngles))
    doc["dynamics"][param] = num(value) + " rad";
  else
    doc["stability"]["theta0"] = num(value) + " rad";
}

}  // namespace

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return kExitCertified;
    case Verdict::NotCertified:
      return kExitNotCertified;
    case Verdict::Unknown:
      return kExitUnknown;
  }
  return kExitUnknown;
}

StabilityReport certify(const ScenarioConfig& cfg) {
  const MuscleModel model(cfg.geometry);
  return check_equilibrium(model, cfg.dyn.theta_d, cfg.dyn.gain, cfg.theta0);
}

std::string render_report(const ScenarioConfig& cfg, const StabilityReport& r) {
  std::ostringstream o;
  const MuscleModel model(cfg.geometry);
  o << "scenario: " << cfg.name << '\n';
  o << "config: " << config_echo(cfg) << '\n';
  o << "theta_d: " << num(r.theta_d) << " rad\n";
  o << "gain k: " << num(cfg.dyn.gain) << " N/m\n";
  o << "internal force: v1 = " << num(r.internal.v1) << " N, v2 = " << num(r.internal.v2) << " N"
    << (r.internal.realizable() ? "" : "  [not realizable: a tension is not positive]") << '\n';
  o << "theta0: " << num(r.theta0) << " rad (admissible range (0, " << num(r.theta0_bound) << "))\n";
  o << "assumptions:\n";
  for (const auto& a : r.assumptions)
    o << "  [" << (a.passed ? "pass" : "FAIL") << "] " << a.name << "  margin = " << num(a.margin) << "  ("
      << a.detail << ")\n";
  o << "segments:\n";
  for (const auto& id : kSegments) {
    const auto& k = model.coeffs(id);
    const auto& g = r.gammas[id.index()];
    const auto& w = r.windows[id.index()];
    o << "  " << segment_label(id) << "  a = " << num(k.a) << "  b = " << num(k.b) << "  c = " << num(k.c)
      << "  alpha = " << num(k.alpha) << "  rho = " << num(k.rho) << '\n';
    o << "        gamma:";
    if (g.gamma1)
      o << " gamma1 = " << num(*g.gamma1);
    if (g.gamma2)
      o << " gamma2 = " << num(*g.gamma2);
    if (g.gamma3)
      o << " gamma3 = " << num(*g.gamma3);
    if (g.gamma4)
      o << " gamma4 = " << num(*g.gamma4);
    o << "\n        convexity window: " << (w.known() ? interval_text(*w.interval) : std::string("unknown"));
    if (w.known())
      o << " (case " << w.branch << ")";
    o << "\n        f''(theta_d) = " << num(r.segment_curvature[id.index()]) << '\n';
  }
  o << "C_theta0: (2,1) = " << num(r.c_theta0[0]) << ", (2,2) = " << num(r.c_theta0[1]) << '\n';
  o << "tension window: " << interval_text(r.tension_window) << '\n';
  o << "certified set: intersection of the tension window and all four segment convexity windows\n";
  if (const auto c = r.certified.certified())
    o << "certified interval: " << interval_text(*c) << '\n';
  else
    o << "certified interval: unknown (bounded by " << interval_text(r.certified.known_bound) << ")\n";
  o << "P''(theta_d): " << num(r.numeric_pdd) << " J/rad^2\n";
  o << "verdict: " << to_string(r.verdict) << '\n';
  for (const auto& reason : r.reasons)
    o << "  - " << reason << '\n';
  return o.str();
}

int cmd_check(const ScenarioConfig& cfg, bool run_verify, std::ostream& out, std::ostream& err) {
  try {
    const StabilityReport report = certify(cfg);
    warn_if_unrealizable(report.internal, err);
    out << render_report(cfg, report);
    if (run_verify) {
      const MuscleModel model(cfg.geometry);
      const Plant plant(model, cfg.dyn);
      out << "verify:\n";
      try {
        const auto windows = verify::cross_validate_windows(model, report.theta0, 4096);
        out << "  window cross-check: " << windows.total_violations() << " in-window violations over "
            << windows.segments.size() << " segment windows + tension window (grid " << windows.grid_n << ")\n";
        for (const auto& s : windows.segments) {
          out << "    " << segment_label(s.id) << ": samples = " << s.samples << ", min f'' inside = "
              << num(s.min_inside);
          if (s.probe_above)
            out << ", f'' one cell above = " << num(*s.probe_above);
          if (!s.outside_sign_changes.empty())
            out << ", sign change outside near " << num(s.outside_sign_changes.front());
          out << '\n';
        }
      } catch (const verify::SoundnessFailure& e) {
        out << "  " << e.what() << '\n';
        err << "error: " << e.what() << '\n';
        return kExitRuntimeFailure;
      }
      const auto scan = verify::scan_potential(plant, 4096);
      out << "  potential scan: argmin = " << num(scan.argmin) << " rad, min = " << num(scan.min)
          << " J, theta_d strict local min = " << (scan.target_strict_local_min ? "yes" : "no")
          << ", convex at theta_d = " << (scan.target_convex ? "yes" : "no") << '\n';
      const double fd = verify::fd_derivative([&](double t) { return plant.potential(t); }, cfg.dyn.theta_d, 1e-4, 2);
      const double rel = std::abs(fd - report.numeric_pdd) / std::max(std::abs(report.numeric_pdd), 1e-300);
      out << "  P'' finite difference = " << num(fd) << " (relative gap " << num(rel) << ")\n";
    }
    return exit_code(report.verdict);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
}

int cmd_simulate(const ScenarioConfig& cfg, std::ostream& csv, std::ostream& summary, std::size_t stride) {
  if (!cfg.simulation) {
    summary << "invalid config: simulation: block missing\n";
    return kExitInvalidConfig;
  }
  stride = std::max<std::size_t>(stride, 1);
  const SimulationBlock& sim = *cfg.simulation;
  const Plant plant(MuscleModel(cfg.geometry), cfg.dyn);
  warn_if_unrealizable(plant.internal(), summary);

  auto write = [&](const Trajectory& traj) {
    write_echo(csv, cfg);
    csv << "t,theta,omega,energy,penalty_active\n";
    const auto& s = traj.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i % stride != 0 && i + 1 != s.size())
        continue;
      csv << num(s[i].t) << ',' << num(s[i].theta) << ',' << num(s[i].omega) << ',' << num(s[i].energy) << ','
          << (s[i].penalty_active ? 1 : 0) << '\n';
    }
  };
  auto penalty_seen = [](const Trajectory& traj) {
    return std::any_of(traj.samples.begin(), traj.samples.end(), [](const Sample& s) { return s.penalty_active; });
  };

  try {
    Trajectory traj = simulate({sim.theta_init, sim.omega_init}, plant, sim.dt, sim.t_final);
    traj.metadata = config_echo(cfg);
    write(traj);
    summary << "final |theta - theta_d| = " << num(std::abs(traj.back().theta - cfg.dyn.theta_d))
            << " rad, penalty_active seen = " << (penalty_seen(traj) ? "yes" : "no")
            << ", samples = " << traj.samples.size() << '\n';
    return 0;
  } catch (const IntegrationDiverged& e) {
    write(e.partial());
    summary << "error: " << e.what() << " (partial trajectory with " << e.partial().samples.size()
            << " samples written)\n";
    return kExitRuntimeFailure;
  }
}

int cmd_potential(const ScenarioConfig& cfg, std::size_t n, std::ostream& csv) {
  if (n < 2)
    throw ConfigError("grid", "potential needs at least 2 samples");
  const MuscleModel model(cfg.geometry);
  const InternalForce v = internal_force(model, cfg.dyn.theta_d, cfg.dyn.gain);
  std::vector<double> theta(n);
  const double lo = cfg.dyn.theta_min;
  const double hi = cfg.dyn.theta_max;
  for (std::size_t i = 0; i < n; ++i)
    theta[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  theta.back() = hi;
  const auto p = verify::potential_on_grid(model, cfg.dyn.theta_d, v, theta);
  write_echo(csv, cfg);
  csv << "theta,P\n";
  for (std::size_t i = 0; i < n; ++i)
    csv << num(theta[i]) << ',' << num(p[i]) << '\n';
  return 0;
}

double SweepAxis::value(std::size_t i) const {
  if (n == 1)
    return lo;
  if (i + 1 == n)
    return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

SweepAxis parse_range(const std::string& param, const std::string& range) {
  const auto first = range.find(':');
  const auto second = first == std::string::npos ? std::string::npos : range.find(':', first + 1);
  if (second == std::string::npos)
    throw ConfigError("range", "expected LO:HI:N, got \"" + range + "\"");
  SweepAxis axis;
  axis.param = param;
  try {
    axis.lo = eval_expression(range.substr(0, first));
    axis.hi = eval_expression(range.substr(first + 1, second - first - 1));
    const std::string count = range.substr(second + 1);
    std::size_t used = 0;
    const long long n = std::stoll(count, &used);
    if (used != count.size() || n < 0)
      throw std::invalid_argument("N must be a non-negative integer");
    axis.n = static_cast<std::size_t>(n);
  } catch (const std::exception& e) {
    throw ConfigError("range", "\"" + range + "\": " + e.what());
  }
  return axis;
}

int cmd_sweep(const ScenarioConfig& cfg, const std::vector<SweepAxis>& axes, std::ostream& csv,
              std::size_t threads) {
  if (axes.empty())
    throw ConfigError("param", "sweep needs at least one --param/--range pair");
  for (const auto& a : axes) {
    if (!sweepable(a.param))
      throw ConfigError("param", "\"" + a.param + "\" is not a geometry or dynamics scalar");
    if (a.n != axes.front().n)
      throw ConfigError("range", "lockstep axes need the same N");
  }
  const std::size_t rows = axes.front().n;

  // Rows share the base gain; a tension pair is only meaningful for the
  // geometry it was measured on.
  nlohmann::json base = cfg.document;
  base["dynamics"].erase("tensions");
  base["dynamics"].erase("tension_tolerance");
  base["dynamics"]["gain"] = cfg.dyn.gain;

  std::vector<std::string> lines(rows);
  auto evaluate = [&](std::size_t i) {
    nlohmann::json doc = base;
    for (const auto& a : axes)
      apply(doc, a.param, a.value(i));
    std::string line = num(axes.front().value(i)) + ",";
    try {
      const ScenarioConfig row_cfg = parse_config(doc);
      const StabilityReport r = certify(row_cfg);
      line += to_string(r.verdict);
      if (const auto c = r.certified.certified())
        line += "," + num(c->lo) + "," + num(c->hi);
      else
        line += ",,";
    } catch (const ConfigError& e) {
      line += "rejected:" + e.assumption() + ",,";
    }
    for (std::size_t k = 1; k < axes.size(); ++k)
      line += "," + num(axes[k].value(i));
    lines[i] = std::move(line);
  };

  const std::size_t workers = thread_budget(threads, rows);
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows; ++i)
      evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows; i = next++)
          evaluate(i);
      });
  }

  write_echo(csv, cfg);
  csv << "value,verdict,certified_lo,certified_hi";
  for (std::size_t k = 1; k < axes.size(); ++k)
    csv << ',' << axes[k].param;
  csv << '\n';
  for (const auto& line : lines)
    csv << line << '\n';
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feed-forward stability certification and simulation for a 1-link-2-muscle arm", "muscu"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::size_t grid = 512;
  std::size_t stride = 1;
  bool run_verify = false;
  std::vector<std::string> params;
  std::vector<std::string> ranges;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Scenario JSON file")->required();
    sub->add_option("--out", out_path, "Write output here instead of stdout");
  };
  CLI::App* check = app.add_subcommand("check", "Certify the target angle; exit 0/1/2 = certified/not/unknown");
  add_common(check);
  check->add_flag("--verify", run_verify, "Also run the numerical cross-checks");
  CLI::App* simulate = app.add_subcommand("simulate", "Integrate the equation of motion, write trajectory CSV");
  add_common(simulate);
  simulate->add_option("--stride", stride, "Write every N-th sample");
  CLI::App* potential = app.add_subcommand("potential", "Write the potential P over [theta_min, theta_max]");
  add_common(potential);
  potential->add_option("--grid", grid, "Number of samples (>= 2)");
  CLI::App* sweep = app.add_subcommand("sweep", "Certify across a parameter range");
  add_common(sweep);
  sweep->add_option("--param", params, "Parameter name (repeat for lockstep sweeps)")->required();
  sweep->add_option("--range", ranges, "LO:HI:N, one per --param")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help is a success; any other usage error counts as bad input.
    return app.exit(e, out, err) == 0 ? 0 : kExitInvalidConfig;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "error: cannot write " << out_path << '\n';
      return kExitRuntimeFailure;
    }
  }
  std::ostream& dest = out_path.empty() ? out : file;

  try {
    const ScenarioConfig cfg = load_config(config_path);
    if (check->parsed())
      return cmd_check(cfg, run_verify, dest, err);
    if (simulate->parsed())
      return cmd_simulate(cfg, dest, out_path.empty() ? err : out, stride);
    if (potential->parsed())
      return cmd_potential(cfg, grid, dest);
    if (params.size() != ranges.size())
      throw ConfigError("param", "each --param needs one --range");
    std::vector<SweepAxis> axes;
    for (std::size_t i = 0; i < params.size(); ++i)
      axes.push_back(parse_range(params[i], ranges[i]));
    return cmd_sweep(cfg, axes, dest);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
}

}  // namespace muscu::cli
