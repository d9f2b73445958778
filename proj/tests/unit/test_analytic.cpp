#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "bathsim/analytic.hpp"
#include "oracles.hpp"

using namespace bathsim;
namespace an = bathsim::analytic;

namespace {

PhysicsParams reference() { return {}; }

BathConditions bath(double cl, double cr, FluxMode mode = FluxMode::analytic()) { return {cl, cr, mode}; }

// Total variation distance between two densities on [lo, hi], split at 0.
double tv_distance(const std::function<double(double)>& f, const std::function<double(double)>& g, double lo,
                   double hi) {
  return 0.5 * oracle::integrate_pieces([&](double v) { return std::fabs(f(v) - g(v)); }, {lo, 0.0, hi}, 1e-10);
}

}  // namespace

TEST_CASE("flux for free particles matches eps (C_L - C_R) / (gamma L)") {
  CHECK(an::smoluchowski_flux(reference(), bath(1, 0)) == doctest::Approx(0.01).epsilon(1e-14));
  PhysicsParams p{20, 2.5, 3, Potential::free()};
  CHECK(an::smoluchowski_flux(p, bath(1.5, 0.25)) == doctest::Approx(2.5 * 1.25 / (20 * 3)).epsilon(1e-14));
}

TEST_CASE("flux vanishes for equal bath concentrations") {
  CHECK(an::smoluchowski_flux(reference(), bath(1, 1)) == 0.0);
  CHECK(an::smoluchowski_flux({7, 0.3, 2, Potential::free()}, bath(4, 4)) == 0.0);
}

TEST_CASE("flux in a linear potential matches 1/(100 (e - 1))") {
  PhysicsParams p = reference();
  p.potential = Potential::linear(1.0);
  CHECK(an::smoluchowski_flux(p, bath(1, 0)) == doctest::Approx(1.0 / (100.0 * (std::numbers::e - 1.0))).epsilon(1e-9));
}

TEST_CASE("flux is antisymmetric under swapping the baths") {
  for (double slope : {0.0, 0.7, -1.3}) {
    PhysicsParams p = reference();
    p.potential = slope == 0.0 ? Potential::free() : Potential::linear(slope);
    // swapping baths mirrors the domain, so mirror the potential too
    PhysicsParams q = p;
    if (slope != 0.0) q.potential = Potential::linear(-slope);
    CHECK(an::smoluchowski_flux(p, bath(2, 0.5)) == doctest::Approx(-an::smoluchowski_flux(q, bath(0.5, 2))));
  }
  CHECK(an::smoluchowski_flux(reference(), bath(2, 0.5)) == -an::smoluchowski_flux(reference(), bath(0.5, 2)));
}

TEST_CASE("non-finite potential is a domain error") {
  PhysicsParams p = reference();
  p.potential = Potential::custom([](double x) { return x > 0.5 ? std::numeric_limits<double>::infinity() : 0.0; },
                                  [](double) { return 0.0; }, "wall");
  CHECK_THROWS_AS(an::smoluchowski_flux(p, bath(1, 0)), DomainError);
}

TEST_CASE("profile examples") {
  CHECK(an::smoluchowski_profile(0.5, reference(), bath(1, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(an::smoluchowski_profile(0.25, reference(), bath(2, 1)) == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(an::smoluchowski_profile(0.0, reference(), bath(3, 1)) == 3.0);
  PhysicsParams lin = reference();
  lin.potential = Potential::linear(1.0);
  CHECK(an::smoluchowski_profile(0.0, lin, bath(1, 0)) == 1.0);
  CHECK(an::smoluchowski_profile(1.0, lin, bath(1, 0.2)) == 0.2);
  CHECK(an::smoluchowski_profile(1.0, reference(), bath(1, 0.2)) == 0.2);
}

TEST_CASE("profile outside the domain is a domain error") {
  CHECK_THROWS_AS(an::smoluchowski_profile(-1e-9, reference(), bath(1, 0)), DomainError);
  CHECK_THROWS_AS(an::smoluchowski_profile(1.0 + 1e-9, reference(), bath(1, 0)), DomainError);
}

TEST_CASE("free profile is affine") {
  const auto b = bath(1.3, 0.4);
  const PhysicsParams p{50, 0.8, 2.0, Potential::free()};
  for (double x = 0.1; x < 1.9; x += 0.2) {
    const double mid = an::smoluchowski_profile(x, p, b);
    const double avg = 0.5 * (an::smoluchowski_profile(x - 0.1, p, b) + an::smoluchowski_profile(x + 0.1, p, b));
    CHECK(mid == doctest::Approx(avg).epsilon(1e-12));
  }
}

TEST_CASE("profile in a linear potential matches the closed form") {
  PhysicsParams p = reference();
  p.potential = Potential::linear(1.0);
  const double e = std::numbers::e;
  for (double x : {0.1, 0.37, 0.5, 0.9}) {
    const double expected = std::exp(-x) * (1.0 - (std::exp(x) - 1.0) / (e - 1.0));
    CHECK(an::smoluchowski_profile(x, p, bath(1, 0)) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("residual density far from the interface underflows to zero") {
  const double d = an::residual_density(10.0, 0.0, reference(), 1e-4);
  CHECK(d == 0.0);
  CHECK_FALSE(std::isnan(d));
  CHECK(an::residual_density(-1e-7, 1.0, reference(), 1e-4) == 0.0);
}

TEST_CASE("residual density agrees with a 50-digit evaluation") {
  const PhysicsParams p = reference();
  struct Pt {
    double x, v, dt;
  };
  for (const Pt& q : {Pt{0.0, 1.0, 1e-4}, Pt{5e-5, 0.7, 1e-4}, Pt{1e-4, 1.2, 1e-4}, Pt{2e-4, -0.1, 1e-4},
                      Pt{3e-3, 2.0, 1e-3}, Pt{1e-6, 0.3, 1e-5}, Pt{0.0, -0.5, 1e-3}}) {
    const double expected = oracle::residual_density_hp(q.x, q.v, p.gamma, p.epsilon, q.dt);
    CHECK(an::residual_density(q.x, q.v, p, q.dt) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("residual density is normalized") {
  const PhysicsParams p = reference();
  for (double dt : {1e-3, 1e-4}) {
    const double g = p.gamma * dt;
    const double s = 1.0 + g * g;
    const double c = std::sqrt(s / (4.0 * p.epsilon * p.gamma * dt));
    auto over_x = [&](double v) {
      // the erfc factor has died out by 9/c (in units of dt) past the drift point
      const double hi = dt * (std::max(0.0, v * (1.0 - g) / s) + 9.0 / c);
      return oracle::integrate([&](double x) { return an::residual_density(x, v, p, dt); }, 0.0, hi, 1e-13);
    };
    const double total = oracle::integrate_pieces(over_x, {-3.0, 0.0, 1.0, 3.0, 10.0}, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("residual density is nonnegative") {
  const PhysicsParams p = reference();
  for (double x = 0.0; x < 1e-3; x += 3.7e-6)
    for (double v = -3.0; v < 8.0; v += 0.11) CHECK(an::residual_density(x, v, p, 1e-4) >= 0.0);
}

TEST_CASE("residual density rejects unstable steps") {
  CHECK_THROWS_AS(an::residual_density(0.0, 1.0, reference(), 0.0), DomainError);
  CHECK_THROWS_AS(an::residual_density(0.0, 1.0, reference(), 0.01), DomainError);
  CHECK_THROWS_AS(an::residual_velocity_marginal(1.0, reference(), -1e-4), DomainError);
}

TEST_CASE("velocity marginal closed form equals the x-quadrature of the density") {
  const PhysicsParams p = reference();
  for (double dt : {1e-3, 1e-4}) {
    for (double v : {-0.4, -0.05, 0.0, 0.2, 1.0, 2.5, 4.0}) {
      const double g = p.gamma * dt;
      const double s = 1.0 + g * g;
      const double c = std::sqrt(s / (4.0 * p.epsilon * p.gamma * dt));
      const double hi = dt * (std::max(0.0, v * (1.0 - g) / s) + 12.0 / c);
      const double quad =
          oracle::integrate([&](double x) { return an::residual_density(x, v, p, dt); }, 0.0, hi, 1e-14);
      CHECK(an::residual_velocity_marginal(v, p, dt) == doctest::Approx(quad).epsilon(1e-6));
    }
  }
}

TEST_CASE("velocity marginal is not the Gaussian of variance eps (1 + (gamma dt)^2)") {
  const PhysicsParams p = reference();
  const double dt = 1e-4;
  const double var = p.epsilon * (1.0 + std::pow(p.gamma * dt, 2));
  const double gauss = std::exp(-1.0 / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
  CHECK(std::fabs(an::residual_velocity_marginal(1.0, p, dt) / gauss - 1.0) > 0.1);
}

TEST_CASE("velocity marginal integrates to one") {
  const PhysicsParams p = reference();
  for (double dt : {1e-3, 1e-4, 1e-5}) {
    const double total =
        oracle::integrate_pieces([&](double v) { return an::residual_velocity_marginal(v, p, dt); }, {-3, 0, 3, 10});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("velocity marginal approaches the flux-weighted speed law as dt shrinks") {
  const PhysicsParams p = reference();
  double previous = 1.0;
  for (double dt : {1e-3, 1e-4, 1e-5}) {
    const double tv = tv_distance([&](double v) { return an::residual_velocity_marginal(v, p, dt); },
                                  [&](double v) { return oracle::rayleigh(v, p.epsilon); }, -3.0, 10.0);
    CHECK(tv < previous);
    previous = tv;
  }
  CHECK(previous < 2e-3);
}

TEST_CASE("velocity law on the interface slice approaches the half-Maxwellian as dt shrinks") {
  const PhysicsParams p = reference();
  double previous = 1.0;
  for (double dt : {1e-3, 1e-4, 1e-5}) {
    const double norm = oracle::integrate_pieces([&](double v) { return an::residual_density(0.0, v, p, dt); },
                                                 {-3, 0, 3, 10}, 1e-12);
    const double tv = tv_distance([&](double v) { return an::residual_density(0.0, v, p, dt) / norm; },
                                  [&](double v) { return oracle::half_maxwellian(v, p.epsilon); }, -3.0, 10.0);
    CHECK(tv < previous);
    previous = tv;
  }
  CHECK(previous < 0.02);
}

TEST_CASE("limiting velocity density") {
  CHECK(an::limiting_velocity_density(-1.0, 1.0) == 0.0);
  CHECK(an::limiting_velocity_density(1e-300, 1.0) == doctest::Approx(2.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(an::limiting_velocity_density(1e-300, 1.0) == doctest::Approx(0.79788).epsilon(1e-5));
  for (double eps : {0.3, 1.0, 4.0}) {
    const double total = oracle::integrate([&](double v) { return an::limiting_velocity_density(v, eps); }, 0.0,
                                           12.0 * std::sqrt(eps));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("interface velocity law reduces to the half-Maxwellian at zero flux") {
  for (double v : {0.01, 0.5, 1.0, 2.3})
    CHECK(an::interface_velocity_density(v, Side::Left, bath(1, 0), 0.0, 1.0) ==
          doctest::Approx(an::limiting_velocity_density(v, 1.0)));
}

TEST_CASE("interface velocity law at v = 0 is the normalized Gaussian peak") {
  const double j = 0.01;
  const double expected = (1.0 / std::sqrt(2.0 * std::numbers::pi)) / (0.5 + j / std::sqrt(2.0 * std::numbers::pi));
  CHECK(an::interface_velocity_density(0.0, Side::Left, bath(1, 0), j, 1.0) == doctest::Approx(expected));
}

TEST_CASE("interface velocity law integrates to one and matches its CDF") {
  for (const auto& [j, c] : {std::pair{0.01, 1.0}, std::pair{0.3, 2.0}, std::pair{-0.2, 1.5}}) {
    const auto b = bath(c, c);
    auto left = [&](double v) { return an::interface_velocity_density(v, Side::Left, b, j, 1.0); };
    CHECK(oracle::integrate(left, 0.0, 12.0) == doctest::Approx(1.0).epsilon(1e-10));
    auto right = [&](double v) { return an::interface_velocity_density(v, Side::Right, b, j, 1.0); };
    CHECK(oracle::integrate(right, -12.0, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    for (double v : {0.3, 1.1, 2.5}) {
      CHECK(an::interface_velocity_cdf(v, Side::Left, b, j, 1.0) ==
            doctest::Approx(oracle::integrate(left, 0.0, v)).epsilon(1e-10));
      CHECK(an::interface_velocity_cdf(-v, Side::Right, b, j, 1.0) ==
            doctest::Approx(oracle::integrate(right, -12.0, -v)).epsilon(1e-10));
    }
    CHECK(an::interface_velocity_density(-0.5, Side::Left, b, j, 1.0) == 0.0);
    CHECK(an::interface_velocity_density(0.5, Side::Right, b, j, 1.0) == 0.0);
  }
}

TEST_CASE("right interface law is the mirror image of the left") {
  for (double v : {0.2, 0.9, 1.7})
    CHECK(an::interface_velocity_density(-v, Side::Right, bath(0.5, 1.3), 0.04, 1.0) ==
          doctest::Approx(an::interface_velocity_density(v, Side::Left, bath(1.3, 0.5), 0.04, 1.0)));
}

TEST_CASE("interface law signals a non-positive normalization") {
  CHECK_THROWS_AS(an::interface_velocity_density(1.0, Side::Left, bath(1, 0), -2.0, 1.0), DomainError);
  CHECK_THROWS_AS(an::interface_velocity_density(-1.0, Side::Right, bath(1, 0), 0.01, 1.0), DomainError);
}

TEST_CASE("unidirectional flux examples and identities") {
  CHECK(an::unidirectional_flux(Side::Left, bath(1, 0), 0.0, 1.0) == doctest::Approx(0.39894).epsilon(1e-5));
  CHECK(an::unidirectional_flux(Side::Left, bath(1, 0), 0.01, 1.0) == doctest::Approx(0.39394).epsilon(1e-5));
  const double k = std::sqrt(1.7 / (2.0 * std::numbers::pi));
  for (double j : {-0.3, 0.0, 0.05, 0.2}) {
    const auto b = bath(2, 1);
    const double jl = an::unidirectional_flux(Side::Left, b, j, 1.7);
    const double jr = an::unidirectional_flux(Side::Right, b, j, 1.7);
    CHECK(jl + jr == doctest::Approx(k * 3.0).epsilon(1e-14));
    CHECK(jl - k * 2.0 == doctest::Approx(-(jr - k * 1.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(an::unidirectional_flux(Side::Left, bath(1, 0), 1.0, 1.0), ConfigError);
  CHECK(an::unidirectional_flux(Side::Right, bath(1, 0), 0.0, 1.0) == 0.0);
}

TEST_CASE("inward flux adds J/2 on the left and removes it on the right") {
  CHECK(an::inward_flux(Side::Left, bath(1, 0), 0.01, 1.0) == doctest::Approx(0.40394).epsilon(1e-5));
  CHECK(an::inward_flux(Side::Right, bath(1, 0), 0.01, 1.0) == 0.0);
  CHECK(an::inward_flux(Side::Right, bath(1, 1), 0.01, 1.0) == doctest::Approx(0.39394).epsilon(1e-5));
  CHECK_THROWS_AS(an::inward_flux(Side::Right, bath(1, 0.001), 0.5, 1.0), ConfigError);
}

TEST_CASE("one-step kernel moments") {
  const auto k = an::one_step_kernel_stats({0.5, 1.0}, reference(), 1e-4);
  CHECK(k.next_x == doctest::Approx(0.5001).epsilon(1e-15));
  CHECK(k.mean_v == doctest::Approx(0.99).epsilon(1e-15));
  CHECK(k.var_v == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(an::one_step_kernel_stats({0.3, 0.0}, reference(), 1e-4).mean_v == 0.0);
  PhysicsParams cold = reference();
  cold.epsilon = 1e-300;
  CHECK(an::one_step_kernel_stats({0.3, 0.0}, cold, 1e-4).var_v < 1e-290);
  PhysicsParams lin = reference();
  lin.potential = Potential::linear(2.0);
  CHECK(an::one_step_kernel_stats({0.3, 1.0}, lin, 1e-4).mean_v == doctest::Approx(0.99 - 2e-4));
}
