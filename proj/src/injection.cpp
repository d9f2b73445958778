#include "bathsim/injection.hpp"

#include <cmath>

#include "bathsim/analytic.hpp"

namespace bathsim {

std::string to_string(InjectionProtocol p) {
  return p == InjectionProtocol::Residual ? "residual" : "boundary-maxwellian";
}

InjectionProtocol parse_protocol(const std::string& name) {
  if (name == "residual") return InjectionProtocol::Residual;
  if (name == "boundary-maxwellian" || name == "maxwellian") return InjectionProtocol::BoundaryMaxwellian;
  throw ConfigError("unknown injection protocol '" + name + "' (expected residual or boundary-maxwellian)");
}

std::string to_string(RateModel m) { return m == RateModel::Influx ? "influx" : "printed"; }

RateModel parse_rate_model(const std::string& name) {
  if (name == "influx") return RateModel::Influx;
  if (name == "printed") return RateModel::Printed;
  throw ConfigError("unknown rate model '" + name + "' (expected influx or printed)");
}

InjectionEvent sample_residual_entry(Side side, const PhysicsParams& params, double dt, const ResidualDraws& draws) {
  const double eps = params.epsilon;
  const double eta = std::sqrt(-2.0 * eps * std::log(draws.speed_uniform));
  const double depth = draws.position_uniform * eta * dt;
  const double kick = std::sqrt(2.0 * eps * params.gamma * dt) * draws.kick_normal;
  const double damping = 1.0 - params.gamma * dt;

  InjectionEvent ev;
  ev.side = side;
  if (side == Side::Left) {
    const double xi = depth - eta * dt;
    ev.state = {depth, eta * damping - params.potential.derivative(xi) * dt + kick};
    ev.pre_image = ParticleState{xi, eta};
  } else {
    const double xi = params.length + (eta * dt - depth);
    ev.state = {params.length - depth, -eta * damping - params.potential.derivative(xi) * dt - kick};
    ev.pre_image = ParticleState{xi, -eta};
  }
  return ev;
}

InjectionEvent sample_residual_entry(Side side, const PhysicsParams& params, double dt, RandomStream& rng) {
  ResidualDraws d;
  d.speed_uniform = rng.uniform_open();
  d.position_uniform = rng.uniform_open();
  d.kick_normal = rng.normal();
  return sample_residual_entry(side, params, dt, d);
}

InjectionEvent sample_boundary_maxwellian(Side side, double epsilon, double length, RandomStream& rng) {
  double speed;
  do {
    speed = std::fabs(std::sqrt(epsilon) * rng.normal());
  } while (speed == 0.0);
  InjectionEvent ev;
  ev.side = side;
  ev.state = side == Side::Left ? ParticleState{0.0, speed} : ParticleState{length, -speed};
  return ev;
}

InjectionEvent sample_entry(InjectionProtocol protocol, Side side, const PhysicsParams& params, double dt,
                            RandomStream& rng) {
  if (protocol == InjectionProtocol::Residual) return sample_residual_entry(side, params, dt, rng);
  return sample_boundary_maxwellian(side, params.epsilon, params.length, rng);
}

double resolve_flux(const BathConditions& bath, const PhysicsParams& params) {
  switch (bath.flux_mode.kind) {
    case FluxMode::Kind::Zero: return 0.0;
    case FluxMode::Kind::Analytic: return analytic::smoluchowski_flux(params, bath);
    case FluxMode::Kind::Fixed: return bath.flux_mode.value;
  }
  return 0.0;
}

double injection_rate(Side side, const BathConditions& bath, const PhysicsParams& params, RateModel model) {
  bath.validate();
  params.validate();
  const double j = resolve_flux(bath, params);
  if (model == RateModel::Influx) return analytic::inward_flux(side, bath, j, params.epsilon);
  return analytic::unidirectional_flux(side, bath, j, params.epsilon);
}

InjectionBatch schedule_injections(double rate, double dt, RandomStream& rng) {
  InjectionBatch batch;
  if (!(rate > 0.0)) return batch;
  batch.count = rng.poisson(rate * dt);
  batch.sub_times.reserve(batch.count);
  for (std::uint64_t i = 0; i < batch.count; ++i) batch.sub_times.push_back(rng.uniform_open() * dt);
  return batch;
}

}  // namespace bathsim
