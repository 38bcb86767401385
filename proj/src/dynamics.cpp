#include "muscu/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "muscu/error.hpp"

namespace muscu {

void validate(const DynParams& dyn) {
  if (!(std::isfinite(dyn.inertia) && dyn.inertia > 0))
    throw ConfigError("dynamics", "inertia must be positive");
  if (!(std::isfinite(dyn.viscosity) && dyn.viscosity > 0))
    throw ConfigError("dynamics", "viscosity must be positive");
  if (!(std::isfinite(dyn.gain) && dyn.gain > 0))
    throw ConfigError("dynamics", "gain must be positive");
  if (dyn.epsilon && !(std::isfinite(*dyn.epsilon) && *dyn.epsilon > 0))
    throw ConfigError("dynamics", "epsilon must be positive when given");
  if (!(dyn.theta_min < dyn.theta_d && dyn.theta_d < dyn.theta_max))
    throw ConfigError("dynamics", "theta_min < theta_d < theta_max is required");
}

InternalForce internal_force(const MuscleModel& model, double theta_d, double k) {
  const MusclePair j = model.jacobian(theta_d);
  return {k * j.m2, -k * j.m1};
}

double gain_from_tensions(const MuscleModel& model, double theta_d, InternalForce measured,
                          double rel_tol) {
  const InternalForce unit = internal_force(model, theta_d, 1.0);
  if (!(unit.v1 > 0))
    throw ConfigError("tension-balance", "dq2/dtheta(theta_d) is not positive; k cannot be solved from v1");
  const double k = measured.v1 / unit.v1;
  const double predicted = k * unit.v2;
  if (!(std::abs(predicted - measured.v2) <= rel_tol * std::abs(measured.v2))) {
    std::ostringstream msg;
    msg << "v2 = " << measured.v2 << " N but the pair balanced at theta_d with k = " << k
        << " predicts " << predicted << " N (tolerance " << rel_tol * 100 << "%)";
    throw ConfigError("tension-balance", msg.str());
  }
  return k;
}

double torque(const MuscleModel& model, double theta, InternalForce v_d) {
  return -dot(model.jacobian(theta), v_d.as_pair());
}

TensionSplit decompose_tension(const MuscleModel& model, double theta, MusclePair force) {
  return decompose_tension(model.jacobian(theta), force);
}

TensionSplit decompose_tension(MusclePair j, MusclePair force) {
  const double norm2 = dot(j, j);
  TensionSplit split;
  if (norm2 == 0.0) {
    split.jacobian_vanished = true;
    split.internal = force;
    return split;
  }
  const double tau = -dot(j, force);
  split.driving = (-tau / norm2) * j;
  split.internal = force - split.driving;
  return split;
}

double potential(const MuscleModel& model, double theta, double theta_d, InternalForce v_d) {
  return dot(model.lengths(theta) - model.lengths(theta_d), v_d.as_pair());
}

double penalty_torque(const DynParams& dyn, double theta) {
  if (!dyn.epsilon)
    return 0.0;
  const double above = std::max(theta - dyn.theta_max, 0.0);
  const double below = std::max(dyn.theta_min - theta, 0.0);
  return (below - above) / *dyn.epsilon;
}

bool penalty_active(const DynParams& dyn, double theta) {
  return dyn.epsilon && (theta > dyn.theta_max || theta < dyn.theta_min);
}

Plant::Plant(MuscleModel model, DynParams dyn)
    : Plant(model, dyn, internal_force(model, dyn.theta_d, dyn.gain)) {}

Plant::Plant(MuscleModel model, DynParams dyn, InternalForce v_d)
    : model_(std::move(model)), dyn_(dyn), v_d_(v_d), q_d_(model_.lengths(dyn.theta_d)) {
  validate(dyn_);
}

double Plant::potential(double theta) const {
  return dot(model_.lengths(theta) - q_d_, v_d_.as_pair());
}

double Plant::energy(State s) const {
  return 0.5 * dyn_.inertia * s.omega * s.omega + potential(s.theta);
}

State Plant::rhs(State s) const {
  const double accel =
      (torque(s.theta) - dyn_.viscosity * s.omega + penalty_torque(dyn_, s.theta)) / dyn_.inertia;
  return {s.omega, accel};
}

State ode_rhs(State s, const MuscleModel& model, const DynParams& dyn) {
  return Plant(model, dyn).rhs(s);
}

}  // namespace muscu
