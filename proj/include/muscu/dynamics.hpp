#pragma once

// Feed-forward joint dynamics driven by a constant internal force.
//
//   I theta'' + mu theta' + <dq/dtheta(theta), v(theta_d)> + penalty(theta) = 0
//
// v(theta_d) is orthogonal to the muscle-length Jacobian at theta_d, so the
// target is an equilibrium. The optional penalty pushes back linearly with
// stiffness 1/epsilon once theta leaves [theta_min, theta_max].

#include <optional>

#include "muscu/geometry.hpp"

namespace muscu {

/// Tension pair applied to (Muscle 1, Muscle 2), newtons.
struct InternalForce {
  double v1 = 0;
  double v2 = 0;

  MusclePair as_pair() const { return {v1, v2}; }
  /// Cables can only pull; both tensions must be positive to be realizable.
  bool realizable() const { return v1 > 0 && v2 > 0; }
};

struct DynParams {
  double inertia = 0;    // kg m^2
  double viscosity = 0;  // N m s / rad
  double gain = 1;       // k, scales the internal force
  double theta_d = 0;
  std::optional<double> epsilon;  // absent: no joint-limit penalty
  double theta_min = 0;
  double theta_max = 0;
};

/// Throws ConfigError on non-positive inertia/viscosity/gain/epsilon or a
/// target outside (theta_min, theta_max).
void validate(const DynParams& dyn);

struct State {
  double theta = 0;
  double omega = 0;
};

/// v(theta_d) = k (dq2/dtheta(theta_d), -dq1/dtheta(theta_d)).
InternalForce internal_force(const MuscleModel& model, double theta_d, double k);

/// Gain reproducing a measured tension pair: k is solved from v1 and v2 is
/// checked against its prediction to `rel_tol`. Throws ConfigError when the
/// pair is not balanced at theta_d within tolerance.
double gain_from_tensions(const MuscleModel& model, double theta_d, InternalForce measured,
                          double rel_tol = 0.02);

/// tau(theta) = -<dq/dtheta(theta), v_d>.
double torque(const MuscleModel& model, double theta, InternalForce v_d);

struct TensionSplit {
  MusclePair driving;   // -tau J*, parallel to J(theta)
  MusclePair internal;  // orthogonal to J(theta)
  /// J(theta) == 0: J* is taken as 0 and the split carries no driving part.
  bool jacobian_vanished = false;
};

/// F = -tau(theta) J(theta)* + v(theta), with J* = J / |J|^2.
TensionSplit decompose_tension(const MuscleModel& model, double theta, MusclePair force);
TensionSplit decompose_tension(MusclePair jacobian, MusclePair force);

/// P(theta) = <q(theta) - q(theta_d), v_d>.
double potential(const MuscleModel& model, double theta, double theta_d, InternalForce v_d);

/// Joint-limit reaction torque (positive pushes theta up). Zero on
/// [theta_min, theta_max] and whenever epsilon is absent.
double penalty_torque(const DynParams& dyn, double theta);
bool penalty_active(const DynParams& dyn, double theta);

/// Model, dynamics and the precomputed internal force of one scenario.
class Plant {
public:
  Plant(MuscleModel model, DynParams dyn);
  Plant(MuscleModel model, DynParams dyn, InternalForce v_d);

  const MuscleModel& model() const noexcept { return model_; }
  const DynParams& dyn() const noexcept { return dyn_; }
  const InternalForce& internal() const noexcept { return v_d_; }

  double torque(double theta) const { return muscu::torque(model_, theta, v_d_); }
  double potential(double theta) const;
  /// V = I omega^2 / 2 + P(theta), excluding the penalty spring.
  double energy(State s) const;
  State rhs(State s) const;

private:
  MuscleModel model_;
  DynParams dyn_;
  InternalForce v_d_;
  MusclePair q_d_;
};

/// d(state)/dt of the (penalized) equation of motion.
State ode_rhs(State s, const MuscleModel& model, const DynParams& dyn);

}  // namespace muscu
