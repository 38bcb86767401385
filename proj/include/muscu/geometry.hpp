#pragma once

// Routing-point geometry of the 1-link-2-muscle arm.
//
// Each muscle i is split by its routing point into two straight segments
// (i,1) and (i,2). The routing point sits on a virtual link of length ell_i
// that turns by half the joint angle, so every segment length has the
// canonical form
//
//     f(theta) = sqrt(a^2 + b^2 + c^2 + 2 b rho sin(theta/2 + alpha)),
//     rho = sqrt(a^2 + c^2),  (cos alpha, sin alpha) = (a, c) / rho.
//
// All lengths are meters, all angles radians.

#include <array>
#include <cstddef>
#include <span>

namespace muscu {

struct SystemParams {
  double L0 = 0;    // base length
  double L1 = 0;    // link length (does not enter the muscle lengths)
  double b1 = 0;    // base offset of the Muscle-1 anchor
  double b2 = 0;    // base offset of the Muscle-2 anchor
  double d1 = 0;
  double d2 = 0;
  double ell1 = 0;  // virtual link lengths
  double ell2 = 0;
  double r1 = 0;
  double r2 = 0;
  double s1 = 0;
  double s2 = 0;

  SystemParams scaled(double factor) const;
};

/// Throws ConfigError naming the first violated check.
void validate(const SystemParams& params);

/// Identifies segment (muscle, segment), both 1-based as in the usual
/// P_ij P_i(j+1) labelling.
struct SegmentId {
  int muscle = 1;
  int segment = 1;

  constexpr std::size_t index() const {
    return static_cast<std::size_t>((muscle - 1) * 2 + (segment - 1));
  }
  friend constexpr bool operator==(SegmentId, SegmentId) = default;
};

inline constexpr std::array<SegmentId, 4> kSegments{
    SegmentId{1, 1}, SegmentId{1, 2}, SegmentId{2, 1}, SegmentId{2, 2}};

struct SegmentCoeffs {
  double a = 0;
  double b = 0;
  double c = 0;
  double alpha = 0;  // in [0, 2 pi)
  double rho = 0;    // sqrt(a^2 + c^2)
  SegmentId id;

  /// Builds coefficients from (a, b, c), filling alpha and rho.
  static SegmentCoeffs from_abc(double a, double b, double c, SegmentId id = {});
};

/// Angle alpha in [0, 2 pi) with (cos alpha, sin alpha) = (a, c)/|(a, c)|.
/// Throws std::domain_error when a = c = 0.
double compute_alpha(double a, double c);

/// Canonical coefficients in kSegments order. Throws ConfigError when a
/// segment would collapse (rho == |b|) or an offset has the wrong sign.
std::array<SegmentCoeffs, 4> derive_coeffs(const SystemParams& params);

/// Segment length straight from the Cartesian routing-point positions.
/// Kept independent of the canonical form so the two can cross-check.
double raw_segment_length(const SystemParams& params, SegmentId id, double theta);

double segment_length(const SegmentCoeffs& k, double theta);
double segment_length_d1(const SegmentCoeffs& k, double theta);
double segment_length_d2(const SegmentCoeffs& k, double theta);

/// Pair of per-muscle quantities (Muscle 1, Muscle 2).
struct MusclePair {
  double m1 = 0;
  double m2 = 0;

  friend constexpr MusclePair operator+(MusclePair x, MusclePair y) { return {x.m1 + y.m1, x.m2 + y.m2}; }
  friend constexpr MusclePair operator-(MusclePair x, MusclePair y) { return {x.m1 - y.m1, x.m2 - y.m2}; }
  friend constexpr MusclePair operator*(double s, MusclePair x) { return {s * x.m1, s * x.m2}; }
  friend constexpr double dot(MusclePair x, MusclePair y) { return x.m1 * y.m1 + x.m2 * y.m2; }
};

/// Validated geometry plus its four canonical segments. Immutable.
class MuscleModel {
public:
  explicit MuscleModel(const SystemParams& params);

  const SystemParams& params() const noexcept { return params_; }
  const SegmentCoeffs& coeffs(SegmentId id) const noexcept { return coeffs_[id.index()]; }
  std::span<const SegmentCoeffs, 4> coeffs() const noexcept { return coeffs_; }

  double muscle_length(int muscle, double theta) const;
  MusclePair lengths(double theta) const;
  /// (dq1/dtheta, dq2/dtheta)
  MusclePair jacobian(double theta) const;
  /// (d^2 q1/dtheta^2, d^2 q2/dtheta^2)
  MusclePair lengths_d2(double theta) const;

private:
  SystemParams params_;
  std::array<SegmentCoeffs, 4> coeffs_;
};

}  // namespace muscu
