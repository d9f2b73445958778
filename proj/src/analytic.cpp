#include "bathsim/analytic.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace bathsim::analytic {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kQuadratureTol = 1e-9;

// sqrt(pi) e^{t^2} erfc(t), the scaled complementary error function times
// sqrt(pi). Continued fraction for large t so that e^{t^2} never overflows.
double scaled_erfc(double t) {
  if (t < 3.0) return std::sqrt(kPi) * std::exp(t * t) * std::erfc(t);
  // erfc(t) = e^{-t^2}/sqrt(pi) * 1/(t + (1/2)/(t + 1/(t + (3/2)/(t + ...))))
  double tail = t;
  for (int k = 60; k >= 1; --k) tail = t + 0.5 * k / tail;
  return 1.0 / tail;
}

// \int_t^\infty erfc(u) du = e^{-t^2}/sqrt(pi) - t erfc(t)
double integrated_erfc(double t) {
  if (t < 3.0) return std::exp(-t * t) / std::sqrt(kPi) - t * std::erfc(t);
  const double g = std::exp(-t * t);
  if (g == 0.0) return 0.0;
  return g / std::sqrt(kPi) * (1.0 - t * scaled_erfc(t));
}

void require_finite_potential(double v) {
  if (!std::isfinite(v)) throw DomainError("potential is not finite on the integration interval");
}

}  // namespace

void require_stable_step(const PhysicsParams& params, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
  if (!(params.gamma * dt < 1.0)) throw DomainError("gamma * dt must be < 1 for the explicit scheme");
}

double boltzmann_integral(double x, const PhysicsParams& params) {
  if (params.potential.is_free()) return x;
  if (x == 0.0) return 0.0;
  auto integrand = [&](double s) {
    const double e = std::exp(params.potential.value(s) / params.epsilon);
    require_finite_potential(e);
    return e;
  };
  double error = 0.0;
  const double result =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, x, 15, kQuadratureTol, &error);
  if (!std::isfinite(result)) throw DomainError("quadrature of the Boltzmann factor failed");
  return result;
}

double smoluchowski_flux(const PhysicsParams& params, const BathConditions& bath) {
  params.validate();
  bath.validate();
  const double eps = params.epsilon;
  if (params.potential.is_free()) return eps * (bath.c_left - bath.c_right) / (params.gamma * params.length);

  const double phi0 = params.potential.value(0.0);
  const double phiL = params.potential.value(params.length);
  require_finite_potential(phi0);
  require_finite_potential(phiL);
  const double numerator = bath.c_left * std::exp(phi0 / eps) - bath.c_right * std::exp(phiL / eps);
  const double integral = boltzmann_integral(params.length, params);
  const double j = eps * numerator / (params.gamma * integral);
  if (!std::isfinite(j)) throw DomainError("flux is not finite for this potential");
  return j;
}

double smoluchowski_profile(double x, const PhysicsParams& params, const BathConditions& bath) {
  params.validate();
  bath.validate();
  if (!(x >= 0.0 && x <= params.length)) throw DomainError("profile position outside [0, L]");
  if (x == 0.0) return bath.c_left;
  if (x == params.length) return bath.c_right;
  if (params.potential.is_free()) return bath.c_left + (bath.c_right - bath.c_left) * (x / params.length);

  const double eps = params.epsilon;
  const double j = smoluchowski_flux(params, bath);
  const double phi0 = params.potential.value(0.0);
  const double phix = params.potential.value(x);
  require_finite_potential(phix);
  const double bracket = bath.c_left * std::exp(phi0 / eps) - params.gamma * j / eps * boltzmann_integral(x, params);
  return std::exp(-phix / eps) * bracket;
}

double residual_density(double x, double v, const PhysicsParams& params, double dt) {
  require_stable_step(params, dt);
  if (x < 0.0) return 0.0;
  const double eps = params.epsilon;
  const double g = params.gamma * dt;
  const double a = 1.0 + g * g;
  const double gaussian = std::exp(-v * v / (2.0 * eps * a));
  if (gaussian == 0.0) return 0.0;
  const double arg = std::sqrt(a / (4.0 * eps * params.gamma * dt)) * (x / dt - v * (1.0 - g) / a);
  const double tail = std::erfc(arg);
  if (tail == 0.0) return 0.0;
  return gaussian * tail / (2.0 * eps * dt * std::sqrt(a));
}

double residual_velocity_marginal(double v, const PhysicsParams& params, double dt) {
  require_stable_step(params, dt);
  const double eps = params.epsilon;
  const double g = params.gamma * dt;
  const double a = 1.0 + g * g;
  const double gaussian = std::exp(-v * v / (2.0 * eps * a));
  if (gaussian == 0.0) return 0.0;
  const double c = std::sqrt(a / (4.0 * eps * params.gamma * dt));
  const double m = v * (1.0 - g) / a;
  // \int_0^\infty erfc(c (x/dt - m)) dx = (dt/c) \int_{-cm}^\infty erfc(u) du
  const double x_integral = dt / c * integrated_erfc(-c * m);
  return gaussian * x_integral / (2.0 * eps * dt * std::sqrt(a));
}

double limiting_velocity_density(double v, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (v <= 0.0) return 0.0;
  return 2.0 * std::exp(-v * v / (2.0 * epsilon)) / std::sqrt(2.0 * kPi * epsilon);
}

namespace {

struct InterfaceLaw {
  double concentration;
  double norm;  // 1/2 + J/(C sqrt(2 pi eps))
};

InterfaceLaw interface_law(Side side, const BathConditions& bath, double flux, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double c = bath.concentration(side);
  if (!(c > 0.0)) throw DomainError("interface velocity law needs a positive bath concentration on the " + to_string(side));
  const double norm = 0.5 + flux / (c * std::sqrt(2.0 * kPi * epsilon));
  if (!(norm > 0.0))
    throw DomainError("flux too large relative to the " + to_string(side) +
                      " concentration: first-order interface velocity law is not normalizable");
  return {c, norm};
}

// Density and CDF of the left-side law in terms of the inward speed u > 0. The
// printed right-side law is the same function of u = -v with C_R.
double inward_density(double u, const InterfaceLaw& law, double flux, double epsilon) {
  if (u < 0.0) return 0.0;
  const double g = std::exp(-u * u / (2.0 * epsilon)) / std::sqrt(2.0 * kPi * epsilon);
  return g * (1.0 + flux * u / (epsilon * law.concentration)) / law.norm;
}

double inward_cdf(double u, const InterfaceLaw& law, double flux, double epsilon) {
  if (u <= 0.0) return 0.0;
  const double s = std::sqrt(epsilon);
  const double gaussian_part = 0.5 * std::erf(u / (s * std::sqrt(2.0)));
  const double tilt_part =
      flux / (law.concentration * std::sqrt(2.0 * kPi * epsilon)) * -std::expm1(-u * u / (2.0 * epsilon));
  return (gaussian_part + tilt_part) / law.norm;
}

}  // namespace

double interface_velocity_density(double v, Side side, const BathConditions& bath, double flux, double epsilon) {
  const auto law = interface_law(side, bath, flux, epsilon);
  return side == Side::Left ? inward_density(v, law, flux, epsilon) : inward_density(-v, law, flux, epsilon);
}

double interface_velocity_cdf(double v, Side side, const BathConditions& bath, double flux, double epsilon) {
  const auto law = interface_law(side, bath, flux, epsilon);
  if (side == Side::Left) return inward_cdf(v, law, flux, epsilon);
  if (v >= 0.0) return 1.0;
  return 1.0 - inward_cdf(-v, law, flux, epsilon);
}

namespace {

double checked_rate(double rate, double concentration, Side side) {
  if (concentration == 0.0 && rate == 0.0) return 0.0;
  if (!(rate > 0.0))
    throw ConfigError("nonpositive unidirectional flux on the " + to_string(side) + " boundary (pure sink)");
  return rate;
}

}  // namespace

double unidirectional_flux(Side side, const BathConditions& bath, double flux, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double c = bath.concentration(side);
  const double thermal = std::sqrt(epsilon / (2.0 * kPi)) * c;
  const double rate = side == Side::Left ? thermal - 0.5 * flux : thermal + 0.5 * flux;
  return checked_rate(rate, c, side);
}

double inward_flux(Side side, const BathConditions& bath, double flux, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double c = bath.concentration(side);
  if (c == 0.0) return 0.0;
  const double thermal = std::sqrt(epsilon / (2.0 * kPi)) * c;
  const double rate = side == Side::Left ? thermal + 0.5 * flux : thermal - 0.5 * flux;
  return checked_rate(rate, c, side);
}

KernelStats one_step_kernel_stats(const ParticleState& state, const PhysicsParams& params, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  return {state.x + state.v * dt,
          state.v * (1.0 - params.gamma * dt) - params.potential.derivative(state.x) * dt,
          2.0 * params.epsilon * params.gamma * dt};
}

}  // namespace bathsim::analytic
