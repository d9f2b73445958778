#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "bathsim/analytic.hpp"
#include "bathsim/observables.hpp"

namespace bathsim {

std::string to_string(GofResult::Kind k) { return k == GofResult::Kind::KS ? "KS" : "ChiSquare"; }

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // theta-function form, converges fast for small lambda
    const double y = pi * pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double term = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * y);
      s += term;
      if (term < 1e-18) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

// Stephens' finite-n correction to the asymptotic distribution.
double ks_p_value(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

GofResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InsufficientData("KS test on an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  GofResult r;
  r.kind = GofResult::Kind::KS;
  r.statistic = d;
  r.n_samples = sorted.size();
  r.p_value = ks_p_value(d, n);
  return r;
}

GofResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("two-sample KS test on an empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::fabs(i / n - j / m));
  }
  GofResult r;
  r.kind = GofResult::Kind::KS;
  r.statistic = d;
  r.n_samples = x.size() + y.size();
  r.p_value = ks_p_value(d, n * m / (n + m));
  return r;
}

GofResult chi_square_test(std::span<const double> observed, std::span<const double> expected, int fitted) {
  if (observed.size() != expected.size()) throw std::invalid_argument("observed/expected size mismatch");
  constexpr double kMinExpected = 5.0;
  std::vector<double> obs, exp;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    total += observed[i];
    if (expected[i] >= kMinExpected) {
      obs.push_back(observed[i]);
      exp.push_back(expected[i]);
    } else {
      pooled_obs += observed[i];
      pooled_exp += expected[i];
    }
  }
  if (total <= 0.0) throw InsufficientData("chi-square test with no observations");
  if (pooled_exp >= kMinExpected) {
    obs.push_back(pooled_obs);
    exp.push_back(pooled_exp);
  } else if (pooled_exp > 0.0 || pooled_obs > 0.0) {
    if (exp.empty()) throw InsufficientData("no cell reaches the minimum expected count");
    const auto k = std::distance(exp.begin(), std::min_element(exp.begin(), exp.end()));
    obs[k] += pooled_obs;
    exp[k] += pooled_exp;
  }
  const int dof = static_cast<int>(obs.size()) - 1 - fitted;
  if (obs.size() < 2 || dof < 1) throw InsufficientData("too few usable cells for a chi-square test");

  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  GofResult r;
  r.kind = GofResult::Kind::ChiSquare;
  r.statistic = stat;
  r.degrees_of_freedom = dof;
  r.n_samples = static_cast<std::size_t>(total);
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat));
  return r;
}

GofResult chi_square_1d(std::span<const double> samples, const std::function<double(double)>& quantile, int bins) {
  if (samples.empty()) throw InsufficientData("chi-square test on an empty sample");
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  std::vector<double> edges(bins - 1);
  for (int i = 1; i < bins; ++i) edges[i - 1] = quantile(static_cast<double>(i) / bins);
  std::vector<double> observed(bins, 0.0);
  for (double s : samples) observed[std::upper_bound(edges.begin(), edges.end(), s) - edges.begin()] += 1.0;
  std::vector<double> expected(bins, static_cast<double>(samples.size()) / bins);
  return chi_square_test(observed, expected);
}

GofResult chi_square_2d(std::span<const ParticleState> samples, const std::function<double(double, double)>& density,
                        const Grid2D& grid) {
  if (samples.empty()) throw InsufficientData("chi-square test on an empty sample");
  if (grid.nx < 1 || grid.nv < 1 || !(grid.x_max > grid.x_min) || !(grid.v_max > grid.v_min))
    throw std::invalid_argument("invalid 2D grid");
  const double dx = (grid.x_max - grid.x_min) / grid.nx;
  const double dv = (grid.v_max - grid.v_min) / grid.nv;
  const std::size_t cells = static_cast<std::size_t>(grid.nx) * grid.nv;

  std::vector<double> observed(cells + 1, 0.0);
  for (const auto& s : samples) {
    const double fx = (s.x - grid.x_min) / dx;
    const double fv = (s.v - grid.v_min) / dv;
    if (fx >= 0.0 && fx < grid.nx && fv >= 0.0 && fv < grid.nv) {
      observed[static_cast<std::size_t>(fx) * grid.nv + static_cast<std::size_t>(fv)] += 1.0;
    } else {
      observed[cells] += 1.0;
    }
  }

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double n = static_cast<double>(samples.size());
  std::vector<double> expected(cells + 1, 0.0);
  double inside = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    const double x0 = grid.x_min + i * dx;
    for (int j = 0; j < grid.nv; ++j) {
      const double v0 = grid.v_min + j * dv;
      auto over_x = [&](double v) {
        return GK::integrate([&](double x) { return density(x, v); }, x0, x0 + dx, 4, 1e-10);
      };
      const double p = GK::integrate(over_x, v0, v0 + dv, 4, 1e-10);
      expected[static_cast<std::size_t>(i) * grid.nv + j] = n * p;
      inside += p;
    }
  }
  expected[cells] = n * std::max(0.0, 1.0 - inside);
  return chi_square_test(observed, expected);
}

GofResult strip_velocity_gof(const RawStats& stats, Side side, const BathConditions& bath,
                             const PhysicsParams& params) {
  const auto& v = stats.strip_velocities[index_of(side)];
  if (v.size() < kMinStripSamples)
    throw InsufficientData("only " + std::to_string(v.size()) + " strip velocity samples on the " + to_string(side) +
                           " (need " + std::to_string(kMinStripSamples) + ")");
  const double j = analytic::smoluchowski_flux(params, bath);
  return ks_test(v, [&](double u) { return analytic::interface_velocity_cdf(u, side, bath, j, params.epsilon); });
}

}  // namespace bathsim
