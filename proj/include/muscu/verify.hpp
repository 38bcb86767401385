#pragma once

// Independent numerical oracles: finite differences, grid scans of the
// potential, and dense sampling of the closed-form stability windows.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "muscu/dynamics.hpp"
#include "muscu/stability.hpp"

namespace muscu::verify {

struct OracleConfig {
  double fd_step = 1e-6;
  std::size_t grid_n = 4096;
};

/// Throws std::invalid_argument unless h > 0 and grid_n >= 16.
void validate(const OracleConfig& cfg);

/// Five-point central difference of order 1 or 2; samples fn on
/// [theta - 2h, theta + 2h].
template <class Fn>
double fd_derivative(const Fn& fn, double theta, double h, int order) {
  const double fm2 = fn(theta - 2 * h);
  const double fm1 = fn(theta - h);
  const double fp1 = fn(theta + h);
  const double fp2 = fn(theta + 2 * h);
  if (order == 1)
    return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
  if (order == 2)
    return (-fm2 + 16 * fm1 - 30 * fn(theta) + 16 * fp1 - fp2) / (12 * h * h);
  throw std::invalid_argument("fd_derivative: order must be 1 or 2");
}

/// n points spaced uniformly inside (lo, hi), one cell in from each end.
std::vector<double> open_grid(double lo, double hi, std::size_t n);

/// P(theta) over `theta`, computed from batch segment lengths.
std::vector<double> potential_on_grid(const MuscleModel& model, double theta_d, InternalForce v_d,
                                      std::span<const double> theta);

struct PotentialScan {
  std::vector<double> theta;
  std::vector<double> potential;
  double cell = 0;
  double argmin = 0;
  double min = 0;
  /// P(theta_d -+ cell) > P(theta_d).
  bool target_strict_local_min = false;
  /// Second difference of P at theta_d with the grid spacing is positive.
  bool target_convex = false;
  bool argmin_near_target = false;  // within one cell
};

/// Index of the smallest value (first one on ties). `values` must be non-empty.
std::size_t locate_minimum(std::span<const double> values);

PotentialScan scan_potential(const MuscleModel& model, double theta_d, InternalForce v_d, double theta_min,
                             double theta_max, std::size_t grid_n);
PotentialScan scan_potential(const Plant& plant, std::size_t grid_n);

/// Samples of one claimed window.
struct WindowProbe {
  SegmentId id;
  bool known = false;
  AngleInterval interval;
  std::size_t samples = 0;
  std::size_t violations = 0;  // f'' <= 0 inside the window
  double min_inside = 0;       // smallest f'' seen inside
  /// Angles outside the window's closure where f'' changes sign (midpoints
  /// between consecutive samples), restricted to (-theta0, pi).
  std::vector<double> outside_sign_changes;
  /// f'' one cell above / below the window, when inside (-theta0, pi).
  std::optional<double> probe_above;
  std::optional<double> probe_below;
};

struct WindowCrossCheck {
  double theta0 = 0;
  std::size_t grid_n = 0;
  std::vector<WindowProbe> segments;
  /// Tension window: dq2/dtheta > 0 and -dq1/dtheta > 0 on every sample.
  std::size_t tension_samples = 0;
  std::size_t tension_violations = 0;

  std::size_t total_violations() const;
};

class SoundnessFailure : public std::runtime_error {
public:
  SoundnessFailure(const std::string& what, WindowCrossCheck report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const WindowCrossCheck& report() const noexcept { return report_; }

private:
  WindowCrossCheck report_;
};

/// Samples f'' of one segment over `window` (open grid of grid_n points)
/// and over the domain (-theta0, pi) outside the window's closure.
WindowProbe probe_window(const SegmentCoeffs& k, std::optional<AngleInterval> window, double theta0,
                         std::size_t grid_n);

/// Densely samples every known window (and the tension window) and checks
/// the sign claims at each sample. Throws SoundnessFailure on any
/// in-window violation. Empty windows pass vacuously.
WindowCrossCheck cross_validate_windows(const MuscleModel& model, double theta0, std::size_t grid_n);

}  // namespace muscu::verify
