#include "muscu/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "muscu/error.hpp"

namespace muscu {

namespace {

constexpr double kPi = std::numbers::pi;

std::string segment_label(SegmentId id) {
  return "(" + std::to_string(id.muscle) + "," + std::to_string(id.segment) + ")";
}

}  // namespace

SegmentGammas segment_gammas(const SegmentCoeffs& k) {
  SegmentGammas g;
  const double abs_b = std::abs(k.b);
  const bool rho_larger = k.rho > abs_b;
  const double ratio = rho_larger ? abs_b / k.rho : k.rho / abs_b;
  const double gamma = std::asin(ratio);
  if (k.id.muscle == 1) {
    (rho_larger ? g.gamma1 : g.gamma2) = gamma;
  } else {
    (rho_larger ? g.gamma3 : g.gamma4) = gamma;
  }
  return g;
}

double theta0_upper_bound(const MuscleModel& model) {
  const double alpha_min = std::min(model.coeffs({2, 1}).alpha, model.coeffs({2, 2}).alpha);
  const double bound = std::min(2.0 * alpha_min - kPi, kPi / 4);
  if (!(bound > 0.0))
    throw ConfigError("theta0-in-range", "Muscle-2 alpha is not above pi/2; no admissible theta0");
  return bound;
}

double default_theta0(const MuscleModel& model) { return 0.5 * theta0_upper_bound(model); }

void validate_theta0(const MuscleModel& model, double theta0) {
  const double bound = theta0_upper_bound(model);
  if (!(theta0 > 0.0 && theta0 < bound)) {
    std::ostringstream msg;
    msg << "theta0 = " << theta0 << " must lie in (0, " << bound << ")";
    throw ConfigError("theta0-in-range", msg.str());
  }
}

double c_theta0(const SegmentCoeffs& k, double theta0) {
  return k.rho * std::sin(-theta0 / 2 + k.alpha);
}

AngleInterval tension_window(const MuscleModel& model, double theta0) {
  const double alpha_max = std::max(model.coeffs({1, 1}).alpha, model.coeffs({1, 2}).alpha);
  return {-theta0, kPi - 2.0 * alpha_max};
}

SegmentWindow stable_window_muscle1(const SegmentCoeffs& k, double theta0) {
  // f'' > 0 exactly where sin(theta/2 + alpha) exceeds the smaller root
  // min(|b|/rho, rho/|b|) = sin(gamma) of the convexity quadratic.
  if (k.rho == std::abs(k.b))
    throw std::invalid_argument("stable_window_muscle1: rho == |b|");
  const SegmentGammas g = segment_gammas(k);
  const double gamma = g.gamma1 ? *g.gamma1 : *g.gamma2;
  SegmentWindow w;
  w.id = k.id;
  w.branch = g.gamma1 ? 1 : 2;
  w.interval = AngleInterval{std::max(-theta0, 2.0 * (gamma - k.alpha)),
                             std::min(kPi, 2.0 * (kPi - gamma - k.alpha))};
  return w;
}

SegmentWindow stable_window_muscle2(const SegmentCoeffs& k, double theta0) {
  const double abs_b = std::abs(k.b);
  const double c = c_theta0(k, theta0);
  SegmentWindow w;
  w.id = k.id;
  if (abs_b < std::min(k.rho, c)) {
    const double gamma3 = std::asin(abs_b / k.rho);
    w.branch = 1;
    w.interval = AngleInterval{-theta0, 2.0 * (kPi - gamma3 - k.alpha)};
  } else if (abs_b > k.rho * std::max(k.rho / c, 1.0)) {
    const double gamma4 = std::asin(k.rho / abs_b);
    w.branch = 2;
    w.interval = AngleInterval{-theta0, 2.0 * (kPi - gamma4 - k.alpha)};
  }
  return w;
}

std::array<SegmentWindow, 4> segment_windows(const MuscleModel& model, double theta0) {
  return {stable_window_muscle1(model.coeffs({1, 1}), theta0),
          stable_window_muscle1(model.coeffs({1, 2}), theta0),
          stable_window_muscle2(model.coeffs({2, 1}), theta0),
          stable_window_muscle2(model.coeffs({2, 2}), theta0)};
}

CertifiedSet certified_interval(const MuscleModel& model, double theta0) {
  CertifiedSet set;
  set.known_bound = tension_window(model, theta0);
  for (const auto& w : segment_windows(model, theta0)) {
    if (w.known())
      set.known_bound = set.known_bound.intersect(*w.interval);
    else
      set.has_unknown = true;
  }
  return set;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "certified";
    case Verdict::NotCertified:
      return "not_certified";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

bool StabilityReport::assumptions_pass() const {
  return std::all_of(assumptions.begin(), assumptions.end(), [](const auto& a) { return a.passed; });
}

double potential_curvature(const MuscleModel& model, double theta_d, double k) {
  const MusclePair j = model.jacobian(theta_d);
  const MusclePair q2 = model.lengths_d2(theta_d);
  return k * (q2.m1 * j.m2 - q2.m2 * j.m1);
}

StabilityReport check_equilibrium(const MuscleModel& model, double theta_d, double k,
                                  std::optional<double> theta0) {
  StabilityReport r;
  r.theta_d = theta_d;
  r.internal = internal_force(model, theta_d, k);
  r.numeric_pdd = potential_curvature(model, theta_d, k);
  for (const auto& id : kSegments)
    r.segment_curvature[id.index()] = segment_length_d2(model.coeffs(id), theta_d);

  // Structural assumptions. A constructed model already satisfies them; the
  // margins are what the report is for.
  {
    double margin = INFINITY;
    for (const auto& c : model.coeffs())
      margin = std::min(margin, std::abs(c.rho - std::abs(c.b)) / std::abs(c.b));
    r.assumptions.push_back({"routing-points-distinct", margin > 0, margin,
                             "min |rho - |b|| / |b| over segments"});
  }
  {
    const double margin = std::min(model.coeffs({1, 1}).a, model.coeffs({1, 2}).a);
    r.assumptions.push_back({"muscle1-offset-positive", margin > 0, margin, "min a_1j (m)"});
  }
  {
    const double margin = -std::max(model.coeffs({2, 1}).a, model.coeffs({2, 2}).a);
    r.assumptions.push_back({"muscle2-offset-negative", margin > 0, margin, "min -a_2j (m)"});
  }

  r.theta0_bound = std::min(2.0 * std::min(model.coeffs({2, 1}).alpha, model.coeffs({2, 2}).alpha) - kPi, kPi / 4);
  r.theta0 = theta0.value_or(0.5 * r.theta0_bound);
  {
    const double margin = std::min(r.theta0, r.theta0_bound - r.theta0);
    r.assumptions.push_back({"theta0-in-range", r.theta0_bound > 0 && margin > 0, margin,
                             "distance of theta0 to the ends of (0, bound)"});
  }

  for (const auto& id : kSegments)
    r.gammas[id.index()] = segment_gammas(model.coeffs(id));
  r.c_theta0 = {c_theta0(model.coeffs({2, 1}), r.theta0), c_theta0(model.coeffs({2, 2}), r.theta0)};
  r.tension_window = tension_window(model, r.theta0);
  r.windows = segment_windows(model, r.theta0);
  r.certified = certified_interval(model, r.theta0);

  if (!r.assumptions_pass()) {
    for (const auto& a : r.assumptions)
      if (!a.passed)
        r.reasons.push_back("assumption " + a.name + " fails");
  }
  if (!r.tension_window.contains(theta_d))
    r.reasons.push_back("theta_d outside the tension window (a balanced tension would not be positive)");
  bool unknown = false;
  for (const auto& w : r.windows) {
    if (!w.known()) {
      unknown = true;
      continue;
    }
    if (!w.interval->contains(theta_d))
      r.reasons.push_back("theta_d outside the convexity window of segment " + segment_label(w.id));
  }

  if (!r.reasons.empty()) {
    r.verdict = Verdict::NotCertified;
  } else if (unknown) {
    r.verdict = Verdict::Unknown;
    for (const auto& w : r.windows)
      if (!w.known())
        r.reasons.push_back("no closed-form convexity window for segment " + segment_label(w.id) +
                            " (|b| lies between the two case thresholds)");
  } else {
    r.verdict = Verdict::Certified;
  }
  return r;
}

}  // namespace muscu
