#pragma once

// Closed-form sufficient conditions for asymptotic stability of theta_d.
//
// theta_d is certified when
//   * both balanced tensions are positive (tension window Theta0), and
//   * every segment length is strictly convex at theta_d (windows Theta_ij),
// because then P''(theta_d) = k[(q11''+q12'') q2' - (q21''+q22'') q1'] > 0 and
// the energy I w^2/2 + P is a strict Lyapunov function. All windows are open
// intervals. The certified set is the intersection of Theta0 with all four
// Theta_ij.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "muscu/dynamics.hpp"
#include "muscu/geometry.hpp"

namespace muscu {

/// Open interval (lo, hi); empty when lo >= hi.
struct AngleInterval {
  double lo = 0;
  double hi = 0;

  bool empty() const { return !(lo < hi); }
  bool contains(double theta) const { return lo < theta && theta < hi; }
  bool contains(const AngleInterval& other) const {
    return other.empty() || (!empty() && lo <= other.lo && other.hi <= hi);
  }
  AngleInterval intersect(const AngleInterval& other) const {
    return {std::max(lo, other.lo), std::min(hi, other.hi)};
  }
};

/// Inverse-sine thresholds of one segment; only the branch whose argument
/// is at most 1 is populated. gamma1/gamma2 belong to Muscle 1 segments,
/// gamma3/gamma4 to Muscle 2 segments.
struct SegmentGammas {
  std::optional<double> gamma1;  // asin(|b|/rho)
  std::optional<double> gamma2;  // asin(rho/|b|)
  std::optional<double> gamma3;  // asin(|b|/rho)
  std::optional<double> gamma4;  // asin(rho/|b|)
};

SegmentGammas segment_gammas(const SegmentCoeffs& k);

/// Convexity window of one segment. `interval` is empty-optional when the
/// closed-form conditions give no conclusion (Muscle-2 case gap).
struct SegmentWindow {
  SegmentId id;
  std::optional<AngleInterval> interval;
  int branch = 0;  // 1: rho > |b|, 2: rho < |b|; 0 when unknown

  bool known() const { return interval.has_value(); }
};

/// min{2 min(alpha21, alpha22) - pi, pi/4}. Throws ConfigError if not
/// positive (a Muscle-2 alpha too close to pi/2).
double theta0_upper_bound(const MuscleModel& model);

/// Default theta0: half the upper bound.
double default_theta0(const MuscleModel& model);

/// Throws ConfigError unless 0 < theta0 < theta0_upper_bound(model).
void validate_theta0(const MuscleModel& model, double theta0);

/// C = rho sin(alpha - theta0/2), the largest value of rho sin(theta/2 + alpha)
/// over (-theta0, pi) for a Muscle-2 segment.
double c_theta0(const SegmentCoeffs& k, double theta0);

/// Theta0 = (-theta0, pi - 2 max(alpha11, alpha12)): both tensions positive.
AngleInterval tension_window(const MuscleModel& model, double theta0);

/// Throws std::invalid_argument when rho == |b|.
SegmentWindow stable_window_muscle1(const SegmentCoeffs& k, double theta0);
SegmentWindow stable_window_muscle2(const SegmentCoeffs& k, double theta0);
std::array<SegmentWindow, 4> segment_windows(const MuscleModel& model, double theta0);

/// Intersection of Theta0 with the known segment windows. When any window
/// is unknown the true certified set cannot be stated; `known_bound` is
/// then only an upper bound on it.
struct CertifiedSet {
  AngleInterval known_bound;
  bool has_unknown = false;

  std::optional<AngleInterval> certified() const {
    if (has_unknown)
      return std::nullopt;
    return known_bound;
  }
};

CertifiedSet certified_interval(const MuscleModel& model, double theta0);

enum class Verdict { Certified, NotCertified, Unknown };
const char* to_string(Verdict v);

struct AssumptionResult {
  std::string name;
  bool passed = false;
  double margin = 0;  // positive when passed
  std::string detail;
};

struct StabilityReport {
  std::vector<AssumptionResult> assumptions;
  double theta_d = 0;
  double theta0 = 0;
  double theta0_bound = 0;
  std::array<double, 2> c_theta0{};  // for segments (2,1), (2,2)
  std::array<SegmentGammas, 4> gammas{};
  AngleInterval tension_window;
  std::array<SegmentWindow, 4> windows{};
  CertifiedSet certified;
  InternalForce internal;
  Verdict verdict = Verdict::Unknown;
  std::vector<std::string> reasons;
  /// P''(theta_d) from the analytic second derivatives, J/rad^2.
  double numeric_pdd = 0;
  /// Analytic f''(theta_d) per segment.
  std::array<double, 4> segment_curvature{};

  bool assumptions_pass() const;
};

/// P''(theta_d) = k[(q11''+q12'') dq2/dtheta - (q21''+q22'') dq1/dtheta] at theta_d.
double potential_curvature(const MuscleModel& model, double theta_d, double k);

/// Full certification of theta_d. Never throws on a constructed model: a
/// theta0 outside its admissible range shows up as a failed assumption.
StabilityReport check_equilibrium(const MuscleModel& model, double theta_d, double k,
                                  std::optional<double> theta0 = std::nullopt);

}  // namespace muscu
