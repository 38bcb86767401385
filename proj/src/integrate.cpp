#include "muscu/integrate.hpp"

#include <cmath>
#include <sstream>

namespace muscu {

namespace {

bool finite(State s) { return std::isfinite(s.theta) && std::isfinite(s.omega); }

Sample make_sample(double t, State s, const Plant& plant) {
  return {t, s.theta, s.omega, plant.energy(s), penalty_active(plant.dyn(), s.theta)};
}

}  // namespace

State step(State s, const Plant& plant, double dt) {
  const State next = rk4_step([&plant](State x) { return plant.rhs(x); }, s, dt);
  if (!finite(next)) {
    Trajectory partial;
    partial.dt = dt;
    throw IntegrationDiverged("integration diverged: non-finite state", std::move(partial), s);
  }
  return next;
}

std::size_t sample_count(double dt, double t_final) {
  const double ratio = t_final / dt;
  // 10 / 1e-4 lands a hair below 100000 in binary; snap near-integers.
  const double nearest = std::round(ratio);
  const double steps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::floor(ratio);
  return static_cast<std::size_t>(steps) + 1;
}

Trajectory simulate(State init, const Plant& plant, double dt, double t_final) {
  if (!(dt > 0 && std::isfinite(dt)))
    throw std::invalid_argument("simulate: dt must be positive");
  if (!(t_final >= 0 && std::isfinite(t_final)))
    throw std::invalid_argument("simulate: t_final must be non-negative");

  const std::size_t n = sample_count(dt, t_final);
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(n);

  State s = init;
  traj.samples.push_back(make_sample(0.0, s, plant));
  for (std::size_t i = 1; i < n; ++i) {
    const State next = rk4_step([&plant](State x) { return plant.rhs(x); }, s, dt);
    if (!finite(next)) {
      std::ostringstream msg;
      msg << "integration diverged at t = " << static_cast<double>(i) * dt;
      throw IntegrationDiverged(msg.str(), std::move(traj), s);
    }
    s = next;
    traj.samples.push_back(make_sample(static_cast<double>(i) * dt, s, plant));
  }
  return traj;
}

}  // namespace muscu
