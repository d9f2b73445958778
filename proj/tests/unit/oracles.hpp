#pragma once

// Independent reference implementations used only by the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

/// Landing density of a free particle one step after leaving a uniform
/// Maxwellian bath, in 50-digit arithmetic.
inline double residual_density_hp(double x_, double v_, double gamma_, double eps_, double dt_) {
  if (x_ < 0) return 0.0;
  const hp x(x_), v(v_), gamma(gamma_), eps(eps_), dt(dt_);
  const hp g = gamma * dt;
  const hp s = 1 + g * g;
  const hp pre = 1 / (2 * eps * dt * sqrt(s));
  const hp gauss = exp(-v * v / (2 * eps * s));
  const hp arg = sqrt(s / (4 * eps * gamma * dt)) * (x / dt - v * (1 - g) / s);
  return static_cast<double>(pre * gauss * erfc(arg));
}

/// Adaptive Gauss-Kronrod on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

/// Composite rule: split [a, b] at the given interior points.
inline double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts, double tol = 1e-12) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += integrate(f, cuts[i], cuts[i + 1], tol);
  return s;
}

/// Half-Maxwellian density on v > 0.
inline double half_maxwellian(double v, double eps) {
  return v > 0 ? 2.0 * std::exp(-v * v / (2 * eps)) / std::sqrt(2 * std::numbers::pi * eps) : 0.0;
}

/// Flux-weighted speed law v exp(-v^2/2eps)/eps on v > 0.
inline double rayleigh(double v, double eps) { return v > 0 ? v * std::exp(-v * v / (2 * eps)) / eps : 0.0; }

}  // namespace oracle
