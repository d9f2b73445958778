#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "bathsim/analytic.hpp"
#include "bathsim/observables.hpp"

using namespace bathsim;

namespace {

ConcentrationProfile line_profile(int bins, double slope, double intercept, double err) {
  ConcentrationProfile p;
  p.lo = 0.0;
  p.hi = 1.0;
  for (int i = 0; i < bins; ++i) {
    const double x = (i + 0.5) / bins;
    p.bin_centers.push_back(x);
    p.values.push_back(intercept + slope * x);
    p.std_errors.push_back(err);
  }
  return p;
}

double uniform_cdf(double u) { return std::clamp(u, 0.0, 1.0); }

// Inverse of a monotone CDF on [lo, hi] by bisection.
double invert(const std::function<double(double)>& cdf, double q, double lo, double hi) {
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("normalization needs data") {
  SimConfig c;
  CHECK_THROWS_AS(normalize_profile(RawStats(c.grid(), c.dt), c), InsufficientData);
}

TEST_CASE("layer metric on an exact line is zero") {
  const PhysicsParams params;
  const LayerReport r = boundary_layer_metric(line_profile(1000, -1.0, 1.0, 0.01), params);
  CHECK(r.layer_deviation < 1e-9);
  CHECK(r.interior_fit.slope == doctest::Approx(-1.0));
  CHECK(r.interior_fit.intercept == doctest::Approx(1.0));
  CHECK(r.layer_centers.size() == 10);
  CHECK(r.layer_width == doctest::Approx(0.01));
}

TEST_CASE("layer metric detects a dip at the interface") {
  const PhysicsParams params;
  ConcentrationProfile p = line_profile(1000, -1.0, 1.0, 0.01);
  for (int i = 0; i < 5; ++i) p.values[i] -= 0.1;
  const LayerReport r = boundary_layer_metric(p, params);
  CHECK(r.layer_deviation > 5.0);
  CHECK(r.systematic_sign == -1);
  const LayerReport right = boundary_layer_metric(p, params, Side::Right);
  CHECK(right.layer_deviation < 1e-9);
}

TEST_CASE("layer metric is invariant under a common rescaling") {
  const PhysicsParams params;
  ConcentrationProfile p = line_profile(1000, -0.8, 1.1, 0.02);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.values[i] += 0.01 * std::sin(37.0 * i);
    p.std_errors[i] *= 1.0 + 0.5 * std::cos(11.0 * i) * std::cos(11.0 * i);
  }
  const LayerReport a = boundary_layer_metric(p, params);
  ConcentrationProfile q = p;
  for (std::size_t i = 0; i < q.size(); ++i) {
    q.values[i] *= 3.7;
    q.std_errors[i] *= 3.7;
  }
  const LayerReport b = boundary_layer_metric(q, params);
  CHECK(a.layer_deviation == doctest::Approx(b.layer_deviation).epsilon(1e-10));
  CHECK(a.systematic_sign == b.systematic_sign);
}

TEST_CASE("layer metric preconditions") {
  const PhysicsParams params;
  CHECK_THROWS_AS(boundary_layer_metric(line_profile(100, -1.0, 1.0, 0.01), params), DomainError);
  ConcentrationProfile narrow = line_profile(1000, -1.0, 1.0, 0.01);
  for (auto& x : narrow.bin_centers) x *= 0.05;  // nothing left inside [0.1 L, 0.9 L]
  CHECK_THROWS_AS(boundary_layer_metric(narrow, params), DomainError);
  CHECK_THROWS_AS(interior_fit(narrow, 1.0), DomainError);
}

TEST_CASE("standard errors shrink like 1/sqrt(n)") {
  SimConfig c;
  c.params.gamma = 20;
  c.dt = 5e-4;
  c.bins = 10;
  c.trajectories = 4000;
  const ProfileSet small = normalize_profile(run_sequential(c), c);
  c.trajectories = 8000;
  c.seed = 2;
  const ProfileSet large = normalize_profile(run_sequential(c), c);
  double ratio = 0.0;
  for (std::size_t i = 0; i < small.bulk.size(); ++i) ratio += large.bulk.std_errors[i] / small.bulk.std_errors[i];
  ratio /= small.bulk.size();
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.2699996716735939).epsilon(1e-10));
  CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.01));
  CHECK(kolmogorov_survival(2.0) == doctest::Approx(0.000670925255805).epsilon(1e-8));
  CHECK(kolmogorov_survival(std::nextafter(1.18, 0.0)) == doctest::Approx(kolmogorov_survival(1.18)).epsilon(1e-12));
  double prev = 1.0;
  for (double l = 0.05; l < 4.0; l += 0.05) {
    const double q = kolmogorov_survival(l);
    CHECK(q <= prev);
    CHECK((q >= 0.0 && q <= 1.0));
    prev = q;
  }
}

TEST_CASE("p-values are uniform under the null") {
  RandomStream rng(91);
  std::vector<double> ks, chi, two;
  const boost::math::normal law;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> u(500), z(500), w(300);
    for (auto& x : u) x = rng.uniform();
    for (auto& x : z) x = rng.normal();
    for (auto& x : w) x = rng.normal();
    ks.push_back(ks_test(u, uniform_cdf).p_value);
    chi.push_back(chi_square_1d(z, [&](double q) { return boost::math::quantile(law, q); }, 20).p_value);
    two.push_back(ks_two_sample(z, w).p_value);
  }
  CHECK(ks_test(ks, uniform_cdf).p_value > 0.01);
  CHECK(ks_test(chi, uniform_cdf).p_value > 0.01);
  // the two-sample statistic is discrete, so only check calibration at 5%
  CHECK(std::count_if(two.begin(), two.end(), [](double p) { return p < 0.05; }) <= 20);
}

TEST_CASE("goodness-of-fit tests reject the wrong law") {
  RandomStream rng(92);
  std::vector<double> z(5000), w(5000);
  for (auto& x : z) x = rng.normal() + 0.1;
  for (auto& x : w) x = rng.normal();
  const boost::math::normal law;
  CHECK(ks_test(z, [&](double x) { return boost::math::cdf(law, x); }).p_value < 0.01);
  CHECK(chi_square_1d(z, [&](double q) { return boost::math::quantile(law, q); }, 20).p_value < 0.01);
  CHECK(ks_two_sample(z, w).p_value < 0.01);
}

TEST_CASE("chi-square pooling and degrees of freedom") {
  const std::vector<double> obs{10, 12, 9, 1, 0, 2};
  const std::vector<double> exp{11, 11, 10, 2, 1, 1};
  const GofResult r = chi_square_test(obs, exp);
  // the three small cells pool into one cell of expectation 4, which joins the smallest retained cell
  CHECK(r.degrees_of_freedom == 2);
  CHECK(r.kind == GofResult::Kind::ChiSquare);
  CHECK(r.n_samples == 34);
  CHECK(r.statistic == doctest::Approx(1.0 / 11 + 1.0 / 11 + 4.0 / 14));
  CHECK(chi_square_test(obs, exp, 1).degrees_of_freedom == 1);
  CHECK_THROWS_AS(chi_square_test(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InsufficientData);
  CHECK_THROWS_AS(chi_square_test(std::vector<double>{1, 2}, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(ks_test({}, uniform_cdf), InsufficientData);
  CHECK(to_string(GofResult::Kind::KS) == "KS");
  CHECK(to_string(GofResult::Kind::ChiSquare) == "ChiSquare");
}

TEST_CASE("strip velocity test against the interface law") {
  const PhysicsParams params;
  const BathConditions bath{1, 0, FluxMode::analytic()};
  const double j = analytic::smoluchowski_flux(params, bath);
  auto cdf = [&](double v) { return analytic::interface_velocity_cdf(v, Side::Left, bath, j, params.epsilon); };

  RawStats stats;
  CHECK_THROWS_AS(strip_velocity_gof(stats, Side::Left, bath, params), InsufficientData);

  RandomStream rng(93);
  auto& v = stats.strip_velocities[0];
  for (int i = 0; i < 20000; ++i) v.push_back(invert(cdf, rng.uniform_open(), 0.0, 12.0));
  const GofResult ok = strip_velocity_gof(stats, Side::Left, bath, params);
  CHECK(ok.p_value > 0.01);
  CHECK(ok.n_samples == 20000);

  RawStats shuffled = stats;
  for (auto& x : shuffled.strip_velocities[0])
    if (rng.uniform() < 0.5) x = -x;
  CHECK(strip_velocity_gof(shuffled, Side::Left, bath, params).p_value < 0.01);
}
