#pragma once

// Fixed-step classical Runge-Kutta integration of the joint dynamics.
//
// The joint-limit penalty is stiff (1/epsilon); with penalties engaged the
// step must satisfy dt << sqrt(I epsilon).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "muscu/dynamics.hpp"

namespace muscu {

inline constexpr double kDefaultTimeStep = 1e-4;

/// One RK4 step of s' = rhs(s). `rhs` maps State -> State.
template <class Rhs>
State rk4_step(const Rhs& rhs, State s, double dt) {
  auto axpy = [](State x, double h, State d) { return State{x.theta + h * d.theta, x.omega + h * d.omega}; };
  const State k1 = rhs(s);
  const State k2 = rhs(axpy(s, dt / 2, k1));
  const State k3 = rhs(axpy(s, dt / 2, k2));
  const State k4 = rhs(axpy(s, dt, k3));
  return {s.theta + dt / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta),
          s.omega + dt / 6 * (k1.omega + 2 * k2.omega + 2 * k3.omega + k4.omega)};
}

struct Sample {
  double t = 0;
  double theta = 0;
  double omega = 0;
  double energy = 0;
  bool penalty_active = false;
};

struct Trajectory {
  std::vector<Sample> samples;
  double dt = 0;
  std::string metadata;  // config echo, filled in by callers that have one

  const Sample& back() const { return samples.back(); }
};

/// Thrown when a step produces a non-finite state. Carries everything
/// integrated up to the last finite sample.
class IntegrationDiverged : public std::runtime_error {
public:
  IntegrationDiverged(const std::string& what, Trajectory partial, State last_finite)
      : std::runtime_error(what), partial_(std::move(partial)), last_(last_finite) {}

  const Trajectory& partial() const noexcept { return partial_; }
  State last_finite() const noexcept { return last_; }

private:
  Trajectory partial_;
  State last_;
};

/// Advances `s` by one RK4 step of the plant dynamics. Throws
/// IntegrationDiverged if the result is not finite.
State step(State s, const Plant& plant, double dt);

/// Number of samples recorded for a run: floor(t_final/dt) + 1.
std::size_t sample_count(double dt, double t_final);

/// Integrates from `init` and records every step. Throws
/// std::invalid_argument for dt <= 0 or t_final < 0.
Trajectory simulate(State init, const Plant& plant, double dt, double t_final);

}  // namespace muscu
