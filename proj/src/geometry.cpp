#include "muscu/geometry.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "muscu/error.hpp"

namespace muscu {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative gap below which rho and |b| count as equal (the two routing
// points of a segment coincide for some angle and the length hits zero).
constexpr double kCollapseTol = 1e-12;

std::string segment_name(SegmentId id) {
  return "segment (" + std::to_string(id.muscle) + "," + std::to_string(id.segment) + ")";
}

}  // namespace

SystemParams SystemParams::scaled(double factor) const {
  SystemParams p = *this;
  for (double* x : {&p.L0, &p.L1, &p.b1, &p.b2, &p.d1, &p.d2, &p.ell1, &p.ell2, &p.r1, &p.r2, &p.s1, &p.s2})
    *x *= factor;
  return p;
}

void validate(const SystemParams& p) {
  struct Named {
    const char* name;
    double value;
  };
  const Named positive[] = {{"L0", p.L0}, {"L1", p.L1},     {"d1", p.d1},     {"d2", p.d2},
                            {"ell1", p.ell1}, {"ell2", p.ell2}, {"r1", p.r1}, {"r2", p.r2},
                            {"s1", p.s1}, {"s2", p.s2}};
  for (const auto& [name, value] : positive) {
    if (!(std::isfinite(value) && value > 0))
      throw ConfigError("positive-lengths", std::string(name) + " must be a positive finite length");
  }
  // b1, b2 only shift the anchors along the base; any finite value works as
  // long as the anchors stay on the correct side of the joint.
  if (!std::isfinite(p.b1) || !std::isfinite(p.b2))
    throw ConfigError("positive-lengths", "b1 and b2 must be finite");
  if (!(p.L0 > p.b1))
    throw ConfigError("muscle1-offset-positive", "L0 must exceed b1");
  if (!(p.L0 > p.b2))
    throw ConfigError("muscle2-offset-negative", "L0 must exceed b2");
}

SegmentCoeffs SegmentCoeffs::from_abc(double a, double b, double c, SegmentId id) {
  SegmentCoeffs k;
  k.a = a;
  k.b = b;
  k.c = c;
  k.alpha = compute_alpha(a, c);
  k.rho = std::hypot(a, c);
  k.id = id;
  return k;
}

double compute_alpha(double a, double c) {
  if (a == 0.0 && c == 0.0)
    throw std::domain_error("compute_alpha: (a, c) = (0, 0) has no direction");
  double alpha = std::atan2(c, a);
  if (alpha < 0.0)
    alpha += kTwoPi;
  // atan2 may round -0 or tiny negatives up to exactly 2 pi.
  if (alpha >= kTwoPi)
    alpha = 0.0;
  return alpha;
}

std::array<SegmentCoeffs, 4> derive_coeffs(const SystemParams& p) {
  std::array<SegmentCoeffs, 4> out{
      SegmentCoeffs::from_abc(p.L0 - p.b1, -p.ell1, p.d1, {1, 1}),
      SegmentCoeffs::from_abc(p.r1, -p.ell1, p.s1, {1, 2}),
      SegmentCoeffs::from_abc(-(p.L0 - p.b2), -p.ell2, p.d2, {2, 1}),
      SegmentCoeffs::from_abc(-p.r2, -p.ell2, p.s2, {2, 2}),
  };
  for (const auto& k : out) {
    if (!(k.b < 0.0 && k.c > 0.0))
      throw ConfigError("segment-signs", segment_name(k.id) + " needs b < 0 and c > 0");
    if (std::abs(k.rho - std::abs(k.b)) <= kCollapseTol * std::abs(k.b))
      throw ConfigError("routing-points-distinct",
                        segment_name(k.id) + " has sqrt(a^2+c^2) == |b|; its length vanishes");
    if (k.id.muscle == 1 && !(k.a > 0.0))
      throw ConfigError("muscle1-offset-positive", segment_name(k.id) + " needs a > 0");
    if (k.id.muscle == 2 && !(k.a < 0.0))
      throw ConfigError("muscle2-offset-negative", segment_name(k.id) + " needs a < 0");
  }
  return out;
}

double raw_segment_length(const SystemParams& p, SegmentId id, double theta) {
  const double pi = std::numbers::pi;
  double x = 0;
  double y = 0;
  switch (id.index()) {
    case 0:
      x = p.L0 - p.b1 - p.ell1 * std::sin(theta / 2);
      y = p.d1 - p.ell1 * std::cos(theta / 2);
      break;
    case 1:
      x = p.r1 - p.ell1 * std::sin(theta / 2);
      y = p.s1 - p.ell1 * std::cos(theta / 2);
      break;
    case 2:
      x = p.L0 - p.b2 + p.ell2 * std::cos(pi + (pi + theta) / 2);
      y = p.d2 + p.ell2 * std::sin(pi + (pi + theta) / 2);
      break;
    case 3:
      x = p.r2 + p.ell2 * std::cos((pi - theta) / 2);
      y = p.s2 - p.ell2 * std::sin((pi - theta) / 2);
      break;
    default:
      throw std::out_of_range("raw_segment_length: segment id");
  }
  return std::hypot(x, y);
}

double segment_length(const SegmentCoeffs& k, double theta) {
  assert(std::isfinite(theta));
  const double base = k.a * k.a + k.b * k.b + k.c * k.c;
  return std::sqrt(base + 2.0 * k.b * k.rho * std::sin(theta / 2 + k.alpha));
}

double segment_length_d1(const SegmentCoeffs& k, double theta) {
  const double f = segment_length(k, theta);
  return 0.5 * k.b * k.rho * std::cos(theta / 2 + k.alpha) / f;
}

double segment_length_d2(const SegmentCoeffs& k, double theta) {
  const double f = segment_length(k, theta);
  const double quad_a = k.b * k.rho;
  const double quad_b = k.a * k.a + k.b * k.b + k.c * k.c;
  const double s = std::sin(theta / 2 + k.alpha);
  return -0.25 * quad_a * (quad_a * s * s + quad_b * s + quad_a) / (f * f * f);
}

MuscleModel::MuscleModel(const SystemParams& params) : params_(params) {
  validate(params_);
  coeffs_ = derive_coeffs(params_);
}

double MuscleModel::muscle_length(int muscle, double theta) const {
  const auto& first = coeffs_[static_cast<std::size_t>(2 * (muscle - 1))];
  const auto& second = coeffs_[static_cast<std::size_t>(2 * (muscle - 1) + 1)];
  return segment_length(first, theta) + segment_length(second, theta);
}

MusclePair MuscleModel::lengths(double theta) const {
  return {muscle_length(1, theta), muscle_length(2, theta)};
}

MusclePair MuscleModel::jacobian(double theta) const {
  return {segment_length_d1(coeffs_[0], theta) + segment_length_d1(coeffs_[1], theta),
          segment_length_d1(coeffs_[2], theta) + segment_length_d1(coeffs_[3], theta)};
}

MusclePair MuscleModel::lengths_d2(double theta) const {
  return {segment_length_d2(coeffs_[0], theta) + segment_length_d2(coeffs_[1], theta),
          segment_length_d2(coeffs_[2], theta) + segment_length_d2(coeffs_[3], theta)};
}

}  // namespace muscu
