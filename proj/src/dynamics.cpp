#include "bathsim/dynamics.hpp"

#include "bathsim/analytic.hpp"

namespace bathsim {

StepOutcome step(const ParticleState& state, const PhysicsParams& params, double dt, RandomStream& rng) {
  analytic::require_stable_step(params, dt);
  return step(state, params, StepCoefficients(params, dt), rng);
}

}  // namespace bathsim
