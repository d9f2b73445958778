#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bathsim/physics.hpp"
#include "bathsim/random.hpp"

namespace bathsim {

enum class InjectionProtocol {
  Residual,            // first landing point of a bath trajectory after one step
  BoundaryMaxwellian,  // exactly on the boundary with half-Maxwellian inward speed
};

std::string to_string(InjectionProtocol p);
InjectionProtocol parse_protocol(const std::string& name);

/// Which unidirectional rate feeds the injection schedule.
enum class RateModel {
  Influx,   // bath-to-domain crossing rate, sqrt(eps/2pi) C +/- J/2 with +J/2 on the left
  Printed,  // the printed source strengths, -J/2 on the left
};

std::string to_string(RateModel m);
RateModel parse_rate_model(const std::string& name);

struct InjectionEvent {
  Side side = Side::Left;
  ParticleState state;
  /// Bath phase point (xi, eta) whose step produced the landing; residual only.
  std::optional<ParticleState> pre_image;
};

/// The three variates consumed by one residual draw.
struct ResidualDraws {
  double speed_uniform;     // U in (0,1): eta = sqrt(-2 eps ln U)
  double position_uniform;  // U' in (0,1): x = U' eta dt
  double kick_normal;       // Z: velocity kick sqrt(2 eps gamma dt) Z
};

/// Exact sampler of the residual landing law: eta from the flux-weighted
/// (Rayleigh) speed density, pre-image xi uniform on (-eta dt, 0), one
/// Langevin step with the force evaluated at xi. Right side is the mirror
/// image x -> L - x, v -> -v.
InjectionEvent sample_residual_entry(Side side, const PhysicsParams& params, double dt, RandomStream& rng);
InjectionEvent sample_residual_entry(Side side, const PhysicsParams& params, double dt, const ResidualDraws& draws);

/// Naive protocol: x on the boundary, |v| = |sqrt(eps) Z| directed inward.
InjectionEvent sample_boundary_maxwellian(Side side, double epsilon, double length, RandomStream& rng);

InjectionEvent sample_entry(InjectionProtocol protocol, Side side, const PhysicsParams& params, double dt,
                            RandomStream& rng);

/// Net flux J implied by the bath's flux mode.
double resolve_flux(const BathConditions& bath, const PhysicsParams& params);

/// Injection rate for one side (particles per unit time). An empty bath has
/// rate 0; a negative rate with a non-empty bath is a ConfigError.
double injection_rate(Side side, const BathConditions& bath, const PhysicsParams& params,
                      RateModel model = RateModel::Influx);

struct InjectionBatch {
  std::uint64_t count = 0;
  /// Residual sub-time in (0, dt) for each particle, in arrival order.
  std::vector<double> sub_times;
};

/// Poisson number of arrivals in one step of length dt.
InjectionBatch schedule_injections(double rate, double dt, RandomStream& rng);

}  // namespace bathsim
