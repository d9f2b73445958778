#pragma once

#include "bathsim/physics.hpp"

/// Closed-form results for free and mean-field Langevin particles between two
/// fixed-concentration baths, used both by the simulator (rates, J) and as
/// test oracles. All functions are pure.
namespace bathsim::analytic {

/// Net steady flux through the domain in the Smoluchowski limit,
///   J = eps (C_L e^{Phi(0)/eps} - C_R e^{Phi(L)/eps}) / (gamma \int_0^L e^{Phi(s)/eps} ds).
/// The integral is exact for Phi = 0 and uses adaptive Gauss-Kronrod otherwise.
/// Throws DomainError if the potential is not finite on [0, L].
double smoluchowski_flux(const PhysicsParams& params, const BathConditions& bath);

/// Stationary concentration p(x) on [0, L]; reproduces C_L and C_R at the ends.
double smoluchowski_profile(double x, const PhysicsParams& params, const BathConditions& bath);

/// \int_0^x e^{Phi(s)/eps} ds, adaptive quadrature with relative tolerance 1e-9.
double boltzmann_integral(double x, const PhysicsParams& params);

/// Joint density of the first in-domain phase point (x, v) of a trajectory that
/// came from a uniform Maxwellian bath in one step of length dt (free particle).
/// x is measured inward from the interface; zero for x < 0. Underflow of the
/// Gaussian or erfc factor gives 0, never NaN.
/// Requires dt > 0 and gamma dt < 1 (DomainError otherwise).
double residual_density(double x, double v, const PhysicsParams& params, double dt);

/// x-marginal of residual_density, in closed form:
///   G(v) (dt/c) [c m erfc(-c m) + exp(-c^2 m^2)/sqrt(pi)]
/// with c = sqrt((1+g^2)/(4 eps gamma dt)), m = v (1-g)/(1+g^2), g = gamma dt.
double residual_velocity_marginal(double v, const PhysicsParams& params, double dt);

/// Half-Maxwellian 2 e^{-v^2/2eps}/sqrt(2 pi eps) for v > 0, 0 otherwise.
double limiting_velocity_density(double v, double epsilon);

/// Velocity density of particles at an interface moving into the domain,
///   left:  e^{-v^2/2eps}/sqrt(2 pi eps) (1 + J v/(eps C_L)) / (1/2 + J/(C_L sqrt(2 pi eps))), v >= 0
///   right: the same with v -> -v and C_R, supported on v <= 0.
/// Throws DomainError when the normalization is not positive (flux too large
/// relative to the concentration for the first-order correction to hold).
double interface_velocity_density(double v, Side side, const BathConditions& bath, double flux, double epsilon);

/// CDF P(V <= v) of interface_velocity_density for the same side.
double interface_velocity_cdf(double v, Side side, const BathConditions& bath, double flux, double epsilon);

/// Unidirectional fluxes (source strengths) as printed:
///   J_L = sqrt(eps/2pi) C_L - J/2,  J_R = sqrt(eps/2pi) C_R + J/2.
/// These are the rates at which trajectories leave through each interface.
/// Throws ConfigError if the rate is negative, or zero with a non-empty bath.
double unidirectional_flux(Side side, const BathConditions& bath, double flux, double epsilon);

/// Rate at which bath trajectories cross into the domain, obtained by integrating
/// the first-order phase-space density over inward velocities:
///   left: sqrt(eps/2pi) C_L + J/2,  right: sqrt(eps/2pi) C_R - J/2.
/// An empty bath (C = 0) has rate 0. Throws ConfigError if negative otherwise.
double inward_flux(Side side, const BathConditions& bath, double flux, double epsilon);

struct KernelStats {
  double next_x;
  double mean_v;
  double var_v;
};

/// Moments of one explicit Euler-Maruyama step from (x, v): the position update
/// is deterministic and the velocity is Gaussian.
KernelStats one_step_kernel_stats(const ParticleState& state, const PhysicsParams& params, double dt);

/// Throws DomainError unless dt > 0 and gamma dt < 1.
void require_stable_step(const PhysicsParams& params, double dt);

}  // namespace bathsim::analytic
