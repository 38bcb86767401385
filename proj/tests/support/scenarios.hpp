#pragma once

// Reference scenarios and random generators shared by the test binaries.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "muscu/dynamics.hpp"
#include "muscu/geometry.hpp"
#include "muscu/integrate.hpp"

namespace muscu::testing {

inline constexpr double kPi = std::numbers::pi;

#ifdef MUSCU_CONFIG_DIR
inline std::string config_path(const std::string& name) { return std::string(MUSCU_CONFIG_DIR) + "/" + name + ".json"; }
#endif
#ifdef MUSCU_TEST_DATA_DIR
inline std::string data_path(const std::string& name) { return std::string(MUSCU_TEST_DATA_DIR) + "/" + name + ".json"; }
#endif

/// Scaled example geometry; L0 is free, the anchors follow from it.
inline SystemParams example1_params(double kappa, double L0 = 70e-3) {
  const double root2 = std::sqrt(2.0);
  SystemParams p;
  p.L0 = L0;
  p.L1 = 15e-3;
  p.b1 = L0 - 2 * kappa;
  p.b2 = L0 - 2 * root2 * kappa;
  p.d1 = 2 * kappa;
  p.d2 = 2 * root2 * kappa;
  p.ell1 = kappa;
  p.ell2 = kappa;
  p.r1 = p.s1 = p.r2 = p.s2 = kappa / (2 * root2);
  return p;
}

inline SystemParams fig5_params() {
  SystemParams p;
  p.L0 = 70e-3;
  p.L1 = 15e-3;
  p.b1 = p.b2 = 20e-3;
  p.d1 = p.d2 = 30e-3;
  p.ell1 = p.ell2 = 30e-3;
  p.r1 = p.r2 = 15e-3;
  p.s1 = p.s2 = 25e-3;
  return p;
}

inline SystemParams table1_params(double d1, double d2) {
  SystemParams p;
  p.L0 = 285e-3;
  p.L1 = 110e-3;
  p.b1 = 87e-3;
  p.b2 = 5e-3;
  p.ell1 = p.ell2 = 99e-3;
  p.r1 = p.r2 = 35e-3;
  p.s1 = p.s2 = 35e-3;
  p.d1 = d1;
  p.d2 = d2;
  return p;
}

/// Simulation scenario of the stable example (kappa = 30 mm).
inline DynParams fig4_dynamics() {
  DynParams dyn;
  dyn.inertia = 4.2e-3;
  dyn.viscosity = 0.1;
  dyn.gain = 400;
  dyn.theta_d = kPi / 12;
  dyn.epsilon = 1e-3;
  dyn.theta_min = -kPi / 180;
  dyn.theta_max = 41 * kPi / 180;
  return dyn;
}

inline State fig4_initial() { return {kPi / 18, 0.0}; }

/// Geometry with every segment's rho/|b| at least `margin` away from 1.
inline SystemParams random_params(std::mt19937_64& rng, double margin = 0.1) {
  std::uniform_real_distribution<double> len(5e-3, 0.2);
  for (;;) {
    SystemParams p;
    p.L0 = len(rng);
    p.L1 = len(rng);
    p.b1 = p.L0 - len(rng);
    p.b2 = p.L0 - len(rng);
    p.d1 = len(rng);
    p.d2 = len(rng);
    p.ell1 = len(rng);
    p.ell2 = len(rng);
    p.r1 = len(rng);
    p.r2 = len(rng);
    p.s1 = len(rng);
    p.s2 = len(rng);
    bool ok = true;
    for (const auto& k : {std::hypot(p.L0 - p.b1, p.d1) / p.ell1, std::hypot(p.r1, p.s1) / p.ell1,
                          std::hypot(p.L0 - p.b2, p.d2) / p.ell2, std::hypot(p.r2, p.s2) / p.ell2})
      ok = ok && std::abs(k - 1.0) > margin;
    if (ok)
      return p;
  }
}

/// Example geometry with every length jittered by up to +-`spread`.
inline SystemParams jittered_example1(std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> jitter(1 - spread, 1 + spread);
  SystemParams p = example1_params(30e-3);
  const double a11 = (p.L0 - p.b1) * jitter(rng);
  const double a21 = (p.L0 - p.b2) * jitter(rng);
  for (double* x : {&p.d1, &p.d2, &p.ell1, &p.ell2, &p.r1, &p.r2, &p.s1, &p.s2})
    *x *= jitter(rng);
  p.b1 = p.L0 - a11;
  p.b2 = p.L0 - a21;
  return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Natural magnitude of f'' for a segment at theta: |A| (2|A| + B) / (4 f^3).
/// Used as a floor when comparing values that may cross zero.
inline double curvature_scale(const SegmentCoeffs& k, double theta) {
  const double f = segment_length(k, theta);
  const double quad_a = std::abs(k.b * k.rho);
  return quad_a * (2 * quad_a + k.a * k.a + k.b * k.b + k.c * k.c) / (4 * f * f * f);
}

/// Natural magnitude of f': |b rho| / (2 f).
inline double slope_scale(const SegmentCoeffs& k, double theta) {
  return std::abs(k.b * k.rho) / (2 * segment_length(k, theta));
}

inline double rel_gap(double approx, double exact, double floor) {
  return std::abs(approx - exact) / std::max(std::abs(exact), floor);
}

/// Plain central differences, kept separate from the library's oracles.
template <class Fn>
double central_d1(const Fn& fn, double x, double h) {
  return (fn(x + h) - fn(x - h)) / (2 * h);
}

template <class Fn>
double central_d2(const Fn& fn, double x, double h) {
  return (fn(x + h) - 2 * fn(x) + fn(x - h)) / (h * h);
}


/// Extended-precision segment length straight from (a, b, c), without alpha:
/// rho sin(theta/2 + alpha) = a sin(theta/2) + c cos(theta/2).
inline long double segment_length_ld(const SegmentCoeffs& k, long double theta) {
  const long double a = k.a, b = k.b, c = k.c;
  const long double s = a * std::sin(theta / 2) + c * std::cos(theta / 2);
  return std::sqrt(a * a + b * b + c * c + 2 * b * s);
}

inline double central_d1_ld(const SegmentCoeffs& k, double theta, long double h) {
  return static_cast<double>((segment_length_ld(k, theta + h) - segment_length_ld(k, theta - h)) / (2 * h));
}

inline double central_d2_ld(const SegmentCoeffs& k, double theta, long double h) {
  return static_cast<double>(
      (segment_length_ld(k, theta + h) - 2 * segment_length_ld(k, theta) + segment_length_ld(k, theta - h)) /
      (h * h));
}
}  // namespace muscu::testing
