#include "muscu/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "muscu/kernels.hpp"

namespace muscu::verify {

namespace {

std::vector<double> segment_d2_on(const SegmentCoeffs& k, std::span<const double> theta) {
  std::vector<double> out(theta.size());
  kernels::eval_segment(k, theta, {.length = {}, .d1 = {}, .d2 = out});
  return out;
}

}  // namespace

void validate(const OracleConfig& cfg) {
  if (!(cfg.fd_step > 0))
    throw std::invalid_argument("OracleConfig: fd_step must be positive");
  if (cfg.grid_n < 16)
    throw std::invalid_argument("OracleConfig: grid_n must be at least 16");
}

std::vector<double> open_grid(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  const double cell = (hi - lo) / static_cast<double>(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = lo + static_cast<double>(i + 1) * cell;
  return grid;
}

std::vector<double> potential_on_grid(const MuscleModel& model, double theta_d, InternalForce v_d,
                                      std::span<const double> theta) {
  const std::size_t n = theta.size();
  const MusclePair q_d = model.lengths(theta_d);
  std::vector<double> out(n, 0.0);
  std::vector<double> len(n);
  for (const auto& id : kSegments) {
    kernels::eval_segment(model.coeffs(id), theta, {.length = len, .d1 = {}, .d2 = {}});
    const double weight = id.muscle == 1 ? v_d.v1 : v_d.v2;
    for (std::size_t i = 0; i < n; ++i)
      out[i] += weight * len[i];
  }
  const double offset = dot(q_d, v_d.as_pair());
  for (auto& p : out)
    p -= offset;
  return out;
}

std::size_t locate_minimum(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("locate_minimum: no values");
  return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

PotentialScan scan_potential(const MuscleModel& model, double theta_d, InternalForce v_d, double theta_min,
                             double theta_max, std::size_t grid_n) {
  validate(OracleConfig{1e-6, grid_n});
  PotentialScan scan;
  scan.theta = open_grid(theta_min, theta_max, grid_n);
  scan.cell = (theta_max - theta_min) / static_cast<double>(grid_n + 1);
  scan.potential = potential_on_grid(model, theta_d, v_d, scan.theta);

  const std::size_t idx = locate_minimum(scan.potential);
  scan.argmin = scan.theta[idx];
  scan.min = scan.potential[idx];
  scan.argmin_near_target = std::abs(scan.argmin - theta_d) <= scan.cell;

  const double around[] = {theta_d - scan.cell, theta_d, theta_d + scan.cell};
  const std::vector<double> p = potential_on_grid(model, theta_d, v_d, around);
  scan.target_strict_local_min = p[0] > p[1] && p[2] > p[1];
  scan.target_convex = p[0] - 2 * p[1] + p[2] > 0;
  return scan;
}

PotentialScan scan_potential(const Plant& plant, std::size_t grid_n) {
  const auto& dyn = plant.dyn();
  return scan_potential(plant.model(), dyn.theta_d, plant.internal(), dyn.theta_min, dyn.theta_max, grid_n);
}

std::size_t WindowCrossCheck::total_violations() const {
  std::size_t n = tension_violations;
  for (const auto& s : segments)
    n += s.violations;
  return n;
}

WindowProbe probe_window(const SegmentCoeffs& k, std::optional<AngleInterval> window, double theta0,
                         std::size_t grid_n) {
  const double domain_lo = -theta0;
  const double domain_hi = std::numbers::pi;

  WindowProbe probe;
  probe.id = k.id;
  probe.known = window.has_value();
  if (window)
    probe.interval = *window;

  if (probe.known && !probe.interval.empty()) {
    const auto inside = open_grid(probe.interval.lo, probe.interval.hi, grid_n);
    const auto fdd = segment_d2_on(k, inside);
    probe.samples = inside.size();
    probe.min_inside = *std::min_element(fdd.begin(), fdd.end());
    probe.violations =
        static_cast<std::size_t>(std::count_if(fdd.begin(), fdd.end(), [](double v) { return !(v > 0); }));

    const double cell = (probe.interval.hi - probe.interval.lo) / static_cast<double>(grid_n + 1);
    if (probe.interval.hi + cell < domain_hi)
      probe.probe_above = segment_length_d2(k, probe.interval.hi + cell);
    if (probe.interval.lo - cell > domain_lo)
      probe.probe_below = segment_length_d2(k, probe.interval.lo - cell);
  }

  // Report, not assert, where convexity is lost outside the window.
  const auto domain = open_grid(domain_lo, domain_hi, grid_n);
  const auto fdd = segment_d2_on(k, domain);
  auto outside = [&](double t) {
    return !probe.known || probe.interval.empty() || t < probe.interval.lo || t > probe.interval.hi;
  };
  for (std::size_t i = 1; i < domain.size(); ++i) {
    if (outside(domain[i - 1]) && outside(domain[i]) && (fdd[i - 1] > 0) != (fdd[i] > 0))
      probe.outside_sign_changes.push_back(0.5 * (domain[i - 1] + domain[i]));
  }
  return probe;
}

WindowCrossCheck cross_validate_windows(const MuscleModel& model, double theta0, std::size_t grid_n) {
  validate(OracleConfig{1e-6, grid_n});

  WindowCrossCheck report;
  report.theta0 = theta0;
  report.grid_n = grid_n;

  for (const auto& w : segment_windows(model, theta0))
    report.segments.push_back(probe_window(model.coeffs(w.id), w.interval, theta0, grid_n));

  const AngleInterval tw = tension_window(model, theta0);
  if (!tw.empty()) {
    const auto inside = open_grid(tw.lo, tw.hi, grid_n);
    std::vector<double> d1(inside.size());
    std::vector<double> q1(inside.size(), 0.0);
    std::vector<double> q2(inside.size(), 0.0);
    for (const auto& id : kSegments) {
      kernels::eval_segment(model.coeffs(id), inside, {.length = {}, .d1 = d1, .d2 = {}});
      auto& acc = id.muscle == 1 ? q1 : q2;
      for (std::size_t i = 0; i < inside.size(); ++i)
        acc[i] += d1[i];
    }
    report.tension_samples = inside.size();
    for (std::size_t i = 0; i < inside.size(); ++i)
      if (!(q2[i] > 0 && -q1[i] > 0))
        ++report.tension_violations;
  }

  if (report.total_violations() > 0) {
    std::ostringstream msg;
    msg << "window soundness failure: " << report.total_violations() << " in-window sign violations";
    throw SoundnessFailure(msg.str(), std::move(report));
  }
  return report;
}

}  // namespace muscu::verify
