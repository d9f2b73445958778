#pragma once

#include <cmath>

#include "bathsim/physics.hpp"
#include "bathsim/random.hpp"

namespace bathsim {

struct StepOutcome {
  enum class Kind { InDomain, ExitLeft, ExitRight };
  Kind kind;
  ParticleState state;  // phase point after the step

  bool exited() const { return kind != Kind::InDomain; }
};

/// Where a phase point lies relative to [0, L]. Landing exactly on a boundary
/// counts as inside.
inline StepOutcome::Kind classify(double x, double length) {
  if (x < 0.0) return StepOutcome::Kind::ExitLeft;
  if (x > length) return StepOutcome::Kind::ExitRight;
  return StepOutcome::Kind::InDomain;
}

/// Precomputed coefficients of the explicit Langevin step for fixed (params, dt).
struct StepCoefficients {
  double damping;  // 1 - gamma dt
  double kick;     // sqrt(2 eps gamma dt)
  double dt;

  StepCoefficients(const PhysicsParams& params, double dt_)
      : damping(1.0 - params.gamma * dt_), kick(std::sqrt(2.0 * params.epsilon * params.gamma * dt_)), dt(dt_) {}
};

/// One step of the discretized Langevin equation
///   x <- x + v dt
///   v <- v (1 - gamma dt) - Phi'(x) dt + sqrt(2 eps gamma) dw,   dw ~ N(0, dt)
/// with the force taken at the pre-step position. Only the velocity update
/// draws from rng.
inline StepOutcome step(const ParticleState& state, const PhysicsParams& params, const StepCoefficients& k,
                        RandomStream& rng) {
  const double force = params.potential.derivative(state.x);
  if (!std::isfinite(force)) throw IntegrationFault("non-finite force at x = " + std::to_string(state.x));
  ParticleState next;
  next.x = state.x + state.v * k.dt;
  next.v = state.v * k.damping - force * k.dt + k.kick * rng.normal();
  return {classify(next.x, params.length), next};
}

/// Convenience overload; validates gamma dt < 1 (DomainError otherwise).
StepOutcome step(const ParticleState& state, const PhysicsParams& params, double dt, RandomStream& rng);

}  // namespace bathsim
