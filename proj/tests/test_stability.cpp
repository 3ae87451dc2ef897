#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mcfa/errors.hpp"
#include "mcfa/stability.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mcfa;
using mcfa::test::rel_err;

constexpr double kPi = std::numbers::pi;

TEST_CASE("mode coefficient") {
  const double Tm = 0.75;
  CHECK(std::abs(mode_coefficient(2, std::sqrt(3.0) / 3.0 * Tm, Tm)) <= 1e-12);
  for (double T : {0.01, 0.3, 1.0, 7.0}) {
    CHECK(mode_coefficient(1, T, Tm) == 0.0);
    CHECK(mode_coefficient(0, T, Tm) == doctest::Approx(8 * (Tm / T) * (Tm / T)).epsilon(1e-14));
  }
  // Without a radius change every coefficient is 2((l(l+1) − 1)² − 1) ≥ 0.
  CHECK(mode_coefficient(3, 1.0, 0.0) == doctest::Approx(2.0 * (121 - 1)));
  // Above the threshold no degree has a negative coefficient; just below it l = 2 does.
  for (int l = 0; l <= 20; ++l) CHECK(mode_coefficient(l, 0.44, Tm) >= 0.0);
  CHECK(mode_coefficient(2, 0.43, Tm) < 0.0);
  CHECK_THROWS_AS(mode_coefficient(-1, 1.0, Tm), DomainError);
}

TEST_CASE("mode second variation") {
  const auto r0 = closed_form_n2({2, 2.0, 1.0, 1.0});
  SUBCASE("trivial and zero-mode cases") {
    const ModePerturbation zero{2, sine_profile({}, 1.0)};
    CHECK(second_variation_mode(r0, zero).value() == 0.0);
    const ModePerturbation tr{1, sine_profile({0.3, -0.2}, 1.0)};
    const auto q = second_variation_mode(r0, tr);
    CHECK(q.potential == 0.0);
    CHECK(q.kinetic > 0.0);
  }
  SUBCASE("endpoint condition") {
    TimeProfile bad{[](double t) { return 1.0 + t; }, [](double) { return 1.0; }};
    CHECK_THROWS_AS(second_variation_mode(r0, {2, bad}), PreconditionError);
    CHECK_THROWS_AS(second_variation_mode(solve_bvp({3, 2.0, 1.0, 0.2}), {2, sine_profile({1.0}, 0.2)}),
                    UnsupportedError);
  }
  SUBCASE("matches the second derivative of the full action") {
    auto grid = SphereGrid::sphere2(16);
    const auto tg = TimeGrid::gauss(1.0, 8, 16);
    std::mt19937_64 rng(42);
    for (int l = 0; l <= 4; ++l) {
      const ModePerturbation p{l, test::random_profile(rng, 1.0)};
      const double fd = test::second_difference5(
          [&](double e) { return test::mode_perturbed_action(r0, p, e, grid, tg); }, 1e-3);
      const double q = second_variation_mode(r0, p).value();
      CHECK(std::abs(fd - q) <= 1e-3 * std::abs(q));
    }
  }
}

TEST_CASE("general second variation") {
  SUBCASE("reduces to the mode form on a harmonic, n = 2") {
    auto grid = SphereGrid::sphere2(8);
    const auto r0 = closed_form_n2({2, 2.0, 1.0, 1.0});
    const auto tg = TimeGrid::gauss(1.0, 16, 16);
    for (int l : {0, 1, 2, 3}) {
      const ModePerturbation p{l, sine_profile({0.7, -0.3, 0.1}, 1.0)};
      auto psi = grid->harmonic(l, 0);
      for (double& v : psi) v *= std::sqrt(4 * kPi);
      const auto g = second_variation_general(
          r0, grid, tg, [&](std::size_t i, double t) { return p.profile.eta(t) * psi[i]; },
          [&](std::size_t i, double t) { return p.profile.eta_dot(t) * psi[i]; });
      CHECK(rel_err(g.value, second_variation_mode(r0, p).value()) <= 1e-8);
      CHECK(std::abs(g.divergence_term) <= 1e-10);
      CHECK(g.terms.size() == 7);
    }
  }
  SUBCASE("spatially constant perturbation is positive and matches the spherical action") {
    for (int n : {2, 3}) {
      const BoundaryData bd{n, 2.0, 1.0, 0.5};
      const auto r0 = n == 2 ? closed_form_n2(bd) : solve_bvp(bd);
      const auto prof = sine_profile({1.0, 0.4}, bd.T);
      const auto tg = TimeGrid::gauss(bd.T, 16, 16);
      const auto g = second_variation_general(
          r0, SphereGrid::symmetric(n), tg, [&](std::size_t, double t) { return prof.eta(t); },
          [&](std::size_t, double t) { return prof.eta_dot(t); });
      CHECK(g.value > 0.0);
      // Oracle: five-point second difference of the one-dimensional action.
      auto perturbed = [&](double e) {
        TrajectoryFunctions f{[&, e](double t) { return r0.r(t) + e * prof.eta(t); },
                              [&, e](double t) { return r0.rdot(t) + e * prof.eta_dot(t); },
                              [](double) { return 0.0; }};
        return spherical_action(SphericalTrajectory::from_functions(n, bd.T, f, 16));
      };
      CHECK(std::abs(test::second_difference5(perturbed, 1e-3) - g.value) <= 1e-6 * std::abs(g.value));
    }
  }
  SUBCASE("zero field") {
    const auto r0 = closed_form_n2({2, 2.0, 1.0, 1.0});
    auto zero = [](std::size_t, double) { return 0.0; };
    const auto g = second_variation_general(r0, SphereGrid::sphere2(4), TimeGrid::gauss(1.0, 2, 8), zero, zero);
    CHECK(g.value == 0.0);
  }
  SUBCASE("input checks") {
    const auto r0 = closed_form_n2({2, 2.0, 1.0, 1.0});
    auto one = [](std::size_t, double) { return 1.0; };
    CHECK_THROWS_AS(second_variation_general(r0, SphereGrid::sphere2(4), TimeGrid::uniform_grid(1.0, 8), one, one),
                    PreconditionError);
    CHECK_THROWS_AS(second_variation_general(r0, SphereGrid::symmetric(3), TimeGrid::uniform_grid(1.0, 8), one, one),
                    ShapeError);
  }
}

TEST_CASE("minimal Rayleigh quotient") {
  const double Tm = 0.75;
  SUBCASE("agrees with a sine-Galerkin eigen-solve") {
    for (double T : {1.0, 0.2, 0.0375}) {
      const auto r0 = closed_form_n2({2, 2.0, 1.0, T}, 64);
      for (int l : {0, 1, 2, 5, 8}) {
        const auto rep = min_rayleigh(l, r0);
        CHECK(rep.converged);
        CHECK_FALSE(rep.coarse_grid);
        CHECK(std::abs(rep.lambda_min - test::sine_galerkin_min(l, r0)) <= 1e-5 * std::max(1.0, std::abs(rep.lambda_min)));
      }
    }
  }
  SUBCASE("non-negative from the threshold on, zero modes positive") {
    for (double f : {1.0, 1.5, 4.0}) {
      const auto r0 = closed_form_n2({2, 2.0, 1.0, f * std::sqrt(3.0) / 3.0 * Tm}, 64);
      for (const auto& s : mode_spectrum(r0, 8)) CHECK(s.lambda_min >= -1e-8);
    }
    for (double T : {0.01, 0.1, 1.0, 10.0}) CHECK(min_rayleigh(1, closed_form_n2({2, 2.0, 1.0, T}, 64)).lambda_min > 0.0);
  }
  SUBCASE("short connections have negative modes of high degree") {
    // At T = 0.05·T_MCF for radii 2 and 1 the quotient is negative for l = 7, 8 but the
    // kinetic term still dominates at l = 2: both scale like 1/T².
    const auto r0 = closed_form_n2({2, 2.0, 1.0, 0.05 * Tm}, 64);
    const auto spec = mode_spectrum(r0, 8);
    CHECK(spec[2].lambda_min > 0.0);
    CHECK(spec[7].lambda_min < 0.0);
    CHECK(spec[8].lambda_min < 0.0);
    // The Rayleigh quotient of any admissible profile bounds the minimum from above.
    const ModePerturbation witness{8, sine_profile({1.0}, r0.duration())};
    CHECK(spec[8].lambda_min <= second_variation_mode(r0, witness).value() / (0.5 * r0.duration()));
  }
  SUBCASE("minimizer is normalized and pinned") {
    const auto r0 = closed_form_n2({2, 2.0, 1.0, 1.0}, 64);
    const auto rep = min_rayleigh(3, r0);
    CHECK(rep.eta.front() == 0.0);
    CHECK(rep.eta.back() == 0.0);
    double m = 0.0;
    const double h = rep.times[1] - rep.times[0];
    for (std::size_t j = 0; j + 1 < rep.eta.size(); ++j)
      m += h / 3.0 * (rep.eta[j] * rep.eta[j] + rep.eta[j] * rep.eta[j + 1] + rep.eta[j + 1] * rep.eta[j + 1]);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("coarse grids are flagged") {
    RayleighOptions o;
    o.initial_elements = 4;
    o.max_elements = 8;
    const auto rep = min_rayleigh(4, closed_form_n2({2, 2.0, 1.0, 1.0}, 64), o);
    CHECK_FALSE(rep.converged);
    CHECK(rep.coarse_grid);
  }
}

TEST_CASE("threshold of the l <= 8 spectrum") {
  const auto th = locate_threshold(2.0, 1.0);
  REQUIRE(th.found);
  CHECK(th.T_definite <= th.T_local);
  CHECK(th.T_definite / th.T_indefinite - 1.0 <= 1e-3);
  CHECK(th.binding_l >= 2);
  const auto below = mode_spectrum(closed_form_n2({2, 2.0, 1.0, th.T_indefinite}, 64), 8);
  CHECK(below[th.binding_l].lambda_min < 0.0);
  CHECK_FALSE(locate_threshold(1.0, 1.0).found);
}

TEST_CASE("spectrum CSV") {
  const auto r0 = closed_form_n2({2, 2.0, 1.0, 1.0}, 64);
  std::ostringstream os;
  write_spectrum_csv(os, mode_spectrum(r0, 2), 1.0, 0.75);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "l,c_l,lambda_min,T,T_MCF,kappa");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}
