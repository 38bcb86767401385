#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "muscu/error.hpp"
#include "muscu/geometry.hpp"
#include "support/scenarios.hpp"

using namespace muscu;
using namespace muscu::testing;

TEST_CASE("compute_alpha on the example directions") {
  const double r2 = std::sqrt(2.0);
  CHECK(compute_alpha(2, 2) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(compute_alpha(-2 * r2, 2 * r2) == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
  CHECK(compute_alpha(1, 0) == 0.0);
  CHECK(compute_alpha(0, 1) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(compute_alpha(0, -1) == doctest::Approx(3 * kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(compute_alpha(0, 0), std::domain_error);
}

TEST_CASE("compute_alpha satisfies both trig relations and lies in [0, 2pi)") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 2000; ++n) {
    const double a = uniform(rng, -5, 5);
    const double c = uniform(rng, -5, 5);
    const double alpha = compute_alpha(a, c);
    const double rho = std::hypot(a, c);
    REQUIRE(alpha >= 0.0);
    REQUIRE(alpha < 2 * kPi);
    CHECK(std::abs(std::sin(alpha) * rho - c) <= 1e-12 * rho);
    CHECK(std::abs(std::cos(alpha) * rho - a) <= 1e-12 * rho);
  }
}

TEST_CASE("derive_coeffs maps the geometry onto (a, b, c)") {
  const SystemParams p = table1_params(198e-3, 280e-3);
  const auto k = derive_coeffs(p);
  CHECK(k[0].b == doctest::Approx(-99e-3).epsilon(1e-14));
  CHECK(k[0].a == doctest::Approx(198e-3).epsilon(1e-14));
  CHECK(k[0].c == doctest::Approx(198e-3).epsilon(1e-14));
  CHECK(k[1].a == p.r1);
  CHECK(k[1].c == p.s1);
  CHECK(k[2].a == doctest::Approx(-(p.L0 - p.b2)));
  CHECK(k[2].c == p.d2);
  CHECK(k[3].a == -p.r2);
  CHECK(k[3].b == -p.ell2);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(k[i].id == kSegments[i]);
    CHECK(k[i].b < 0);
    CHECK(k[i].c > 0);
  }
}

TEST_CASE("example geometry has alphas pi/4, pi/4, 3pi/4, 3pi/4 for any scale") {
  for (double kappa : {1.0, 30e-3, 140 / std::sqrt(2.0) * 1e-3, 7.5}) {
    const auto k = derive_coeffs(example1_params(kappa, 3 * kappa));
    CHECK(k[0].alpha == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(k[1].alpha == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(k[2].alpha == doctest::Approx(3 * kPi / 4).epsilon(1e-14));
    CHECK(k[3].alpha == doctest::Approx(3 * kPi / 4).epsilon(1e-14));
  }
}

TEST_CASE("a segment with sqrt(a^2+c^2) == |b| is rejected") {
  SystemParams p = fig5_params();
  p.r1 = 18e-3;
  p.s1 = 24e-3;  // rho = 30 mm = ell1
  try {
    derive_coeffs(p);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.assumption() == "routing-points-distinct");
  }
  CHECK_THROWS_AS(MuscleModel{p}, ConfigError);
}

TEST_CASE("model construction enforces anchor sides and positive lengths") {
  SystemParams p = fig5_params();
  p.b1 = p.L0;
  CHECK_THROWS_AS(MuscleModel{p}, ConfigError);
  p = fig5_params();
  p.b2 = p.L0 + 1e-3;
  CHECK_THROWS_AS(MuscleModel{p}, ConfigError);
  p = fig5_params();
  p.s2 = 0;
  CHECK_THROWS_AS(MuscleModel{p}, ConfigError);
  p = fig5_params();
  p.ell1 = -1e-3;
  CHECK_THROWS_AS(MuscleModel{p}, ConfigError);
  p = example1_params(30e-3);
  CHECK(p.b2 < 0);
  CHECK_NOTHROW(MuscleModel{p});
}

TEST_CASE("raw segment lengths at theta = 0") {
  SystemParams p = fig5_params();
  p.L0 = 3;
  p.b1 = 1;
  p.ell1 = 1;
  p.d1 = 2;
  CHECK(raw_segment_length(p, {1, 1}, 0.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  p.r2 = 1;
  p.ell2 = 1;
  p.s2 = 2;
  CHECK(raw_segment_length(p, {2, 2}, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("canonical form reproduces the raw Cartesian lengths") {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const SystemParams p = random_params(rng, 0.01);
    const auto coeffs = derive_coeffs(p);
    const double theta = uniform(rng, -kPi / 4, kPi);
    for (const auto& id : kSegments) {
      const double raw = raw_segment_length(p, id, theta);
      const double canon = segment_length(coeffs[id.index()], theta);
      worst = std::max(worst, std::abs(raw - canon) / raw);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("segment_length values and range") {
  const SegmentCoeffs k = SegmentCoeffs::from_abc(2, -1, 2);
  CHECK(segment_length(k, 0.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (int n = 0; n < 1000; ++n) {
    const SegmentCoeffs r =
        SegmentCoeffs::from_abc(uniform(rng, -3, 3), -uniform(rng, 0.1, 3), uniform(rng, 0.1, 3));
    const double theta = uniform(rng, -kPi, 2 * kPi);
    const double f = segment_length(r, theta);
    const double lo = std::abs(r.rho - std::abs(r.b));
    const double hi = r.rho + std::abs(r.b);
    CHECK(f >= lo * (1 - 1e-12));
    CHECK(f <= hi * (1 + 1e-12));
  }
}

TEST_CASE("first derivative: sign, zero and finite differences") {
  const MuscleModel model(example1_params(1.0, 3.0));
  for (double theta = -0.3; theta < kPi; theta += 0.01) {
    CHECK(segment_length_d1(model.coeffs({2, 1}), theta) > 0);
    CHECK(segment_length_d1(model.coeffs({2, 2}), theta) > 0);
  }
  // theta/2 + alpha = pi/2 with alpha = pi/4
  const auto& k11 = model.coeffs({1, 1});
  CHECK(std::abs(segment_length_d1(k11, kPi / 2)) < 1e-15);

  std::mt19937_64 rng(17);
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto coeffs = derive_coeffs(random_params(rng));
    const auto& k = coeffs[static_cast<std::size_t>(n % 4)];
    const double theta = uniform(rng, -kPi / 8, kPi);
    const double fd = central_d1_ld(k, theta, 1e-5L);
    worst = std::max(worst, rel_gap(fd, segment_length_d1(k, theta), 1e-3 * slope_scale(k, theta)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("second derivative: roots and finite differences") {
  // Smaller root of the convexity quadratic: sin(theta/2 + alpha) = |b| / rho.
  const SegmentCoeffs k = SegmentCoeffs::from_abc(3, -1, 2);
  const double theta_root = 2 * (std::asin(std::abs(k.b) / k.rho) - k.alpha);
  CHECK(std::abs(segment_length_d2(k, theta_root)) < 1e-14 * curvature_scale(k, theta_root));
  CHECK(segment_length_d2(k, theta_root + 1e-3) > 0);
  CHECK(segment_length_d2(k, theta_root - 1e-3) < 0);

  std::mt19937_64 rng(23);
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto coeffs = derive_coeffs(random_params(rng));
    const auto& c = coeffs[static_cast<std::size_t>(n % 4)];
    const double theta = uniform(rng, -kPi / 8, kPi);
    const double fd = central_d2_ld(c, theta, 1e-4L);
    worst = std::max(worst, rel_gap(fd, segment_length_d2(c, theta), 1e-3 * curvature_scale(c, theta)));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("second derivative changes sign at the (2,2) window end pi/6") {
  const MuscleModel model(example1_params(1.0, 3.0));
  const auto& k = model.coeffs({2, 2});
  CHECK(segment_length_d2(k, kPi / 6 - 1e-6) > 0);
  CHECK(segment_length_d2(k, kPi / 6 + 1e-3) < 0);
}

TEST_CASE("muscle lengths and Jacobian") {
  const MuscleModel model(example1_params(1.0, 3.0));
  const double q12 = std::hypot(1 / (2 * std::sqrt(2.0)), 1 / (2 * std::sqrt(2.0)) - 1);
  CHECK(model.muscle_length(1, 0.0) == doctest::Approx(std::sqrt(5.0) + q12).epsilon(1e-14));
  CHECK(model.lengths(0.3).m2 == doctest::Approx(model.muscle_length(2, 0.3)));

  for (double theta = -0.39; theta < kPi; theta += 0.013)
    CHECK(model.jacobian(theta).m2 > 0);

  std::mt19937_64 rng(31);
  for (int n = 0; n < 200; ++n) {
    const MuscleModel m(random_params(rng));
    const double theta = uniform(rng, -kPi / 8, kPi);
    const MusclePair j = m.jacobian(theta);
    for (int i : {1, 2}) {
      const double fd = central_d1([&](double t) { return m.muscle_length(i, t); }, theta, 1e-6);
      const double exact = i == 1 ? j.m1 : j.m2;
      const double floor = 1e-3 * (slope_scale(m.coeffs({i, 1}), theta) + slope_scale(m.coeffs({i, 2}), theta));
      CHECK(rel_gap(fd, exact, floor) < 1e-6);
    }
  }
}

TEST_CASE("alpha quadrants follow the anchor sides") {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 500; ++n) {
    const MuscleModel m(random_params(rng));
    for (const auto& k : m.coeffs()) {
      if (k.id.muscle == 1) {
        CHECK(k.alpha > 0);
        CHECK(k.alpha < kPi / 2);
      } else {
        CHECK(k.alpha > kPi / 2);
        CHECK(k.alpha < kPi);
      }
    }
  }
}
