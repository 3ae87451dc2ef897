#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mcfa/errors.hpp"
#include "mcfa/evolution.hpp"
#include "test_support.hpp"

using namespace mcfa;

TEST_CASE("time grids") {
  const auto u = TimeGrid::uniform_grid(2.0, 16);
  CHECK(u.uniform);
  CHECK(u.size() == 17);
  double sum = 0.0, cubic = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    sum += u.w[k];
    cubic += u.w[k] * u.t[k] * u.t[k] * u.t[k];
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cubic == doctest::Approx(4.0).epsilon(1e-14));  // Simpson is exact on cubics

  const auto g = TimeGrid::gauss(3.0, 4, 8);
  CHECK_FALSE(g.uniform);
  double gs = 0.0;
  for (double w : g.w) gs += w;
  CHECK(gs == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(TimeGrid::uniform_grid(1.0, 7), ShapeError);
  CHECK_THROWS_AS(TimeGrid::uniform_grid(-1.0, 8), DomainError);
}

TEST_CASE("normal velocity on round spheres") {
  auto grid = SphereGrid::sphere2(4);
  // Mean curvature flow shrinking: r = sqrt(1 − 4t), ṙ = −2/r, so v = −ṙ = 2/r = H.
  const auto ev = Evolution::sample(
      grid, TimeGrid::uniform_grid(0.2, 8), [](std::size_t, double t) { return std::sqrt(1 - 4 * t); },
      [](std::size_t, double t) { return -2.0 / std::sqrt(1 - 4 * t); });
  for (std::size_t k = 0; k < ev.steps(); ++k) {
    const auto& g = ev.geometry(k);
    for (std::size_t i = 0; i < ev.nodes(); ++i) {
      CHECK(ev.normal_velocity(k)[i] == doctest::Approx(-ev.radial_velocity(k)[i]).epsilon(1e-15));
      CHECK(ev.normal_velocity(k)[i] == doctest::Approx(g.mean_curvature[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("from_radii differentiates in time to fourth order") {
  auto grid = SphereGrid::sphere2(4);
  const auto y2 = grid->harmonic(2, 1);
  auto r = [&](std::size_t i, double t) { return 1.0 + 0.2 * std::sin(2 * t) + 0.05 * t * t * y2[i]; };
  auto rt = [&](std::size_t i, double t) { return 0.4 * std::cos(2 * t) + 0.1 * t * y2[i]; };
  double prev = 0.0;
  for (int m : {32, 64}) {
    const auto tg = TimeGrid::uniform_grid(1.0, m);
    SpaceTimeField rv(tg.size(), std::vector<double>(grid->size()));
    for (std::size_t k = 0; k < tg.size(); ++k)
      for (std::size_t i = 0; i < grid->size(); ++i) rv[k][i] = r(i, tg.t[k]);
    const auto ev = Evolution::from_radii(grid, tg, rv);
    double err = 0.0;
    for (std::size_t k = 0; k < tg.size(); ++k)
      for (std::size_t i = 0; i < grid->size(); ++i) err = std::max(err, std::abs(ev.radial_velocity(k)[i] - rt(i, tg.t[k])));
    if (prev > 0.0) CHECK(prev / err > 12.0);  // ≈ 16 for fourth order
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("evolution input checks") {
  auto grid = SphereGrid::sphere2(4);
  auto one = [](std::size_t, double) { return 1.0; };
  auto zero = [](std::size_t, double) { return 0.0; };
  CHECK_THROWS_AS(Evolution::sample(grid, TimeGrid::uniform_grid(1.0, 8), zero, zero), DomainError);
  TimeGrid bad;
  bad.t = {0.0, 0.5, 0.5, 1.0};
  bad.w = {0.25, 0.25, 0.25, 0.25};
  CHECK_THROWS_AS(Evolution::sample(grid, bad, one, zero), DomainError);
  CHECK_THROWS_AS(Evolution::from_radii(grid, TimeGrid::gauss(1.0, 2, 4), SpaceTimeField(8, std::vector<double>(grid->size(), 1.0))),
                  PreconditionError);
  const auto gev = Evolution::sample(grid, TimeGrid::gauss(1.0, 2, 4), one, zero);
  CHECK_THROWS_AS(el_kernel(gev, Execution::serial), PreconditionError);
}

TEST_CASE("normal component of a radial displacement") {
  auto grid = SphereGrid::sphere2(4);
  const auto ev = Evolution::lift(closed_form_n2({2, 2.0, 1.0, 1.0}), grid, TimeGrid::uniform_grid(1.0, 8));
  SpaceTimeField rho(ev.steps(), std::vector<double>(ev.nodes(), 0.3));
  const auto f = normal_component(ev, rho);
  for (const auto& row : f)
    for (double x : row) CHECK(x == doctest::Approx(-0.3).epsilon(1e-15));
}

TEST_CASE("serial and OpenMP kernels agree exactly") {
  auto grid = SphereGrid::sphere2(6);
  const auto y3 = grid->harmonic(3, 2);
  const auto tg = TimeGrid::uniform_grid(1.0, 16);
  auto r = [&](std::size_t i, double t) { return 1.5 - 0.4 * t + 0.05 * std::sin(3 * t) * y3[i]; };
  auto rt = [&](std::size_t i, double t) { return -0.4 + 0.15 * std::cos(3 * t) * y3[i]; };
  EvolutionOptions serial;
  serial.execution = Execution::serial;
  const auto a = Evolution::sample(grid, tg, r, rt, serial);
  const auto b = Evolution::sample(grid, tg, r, rt);
  CHECK(action_kernel(a, Execution::serial) == action_kernel(b, Execution::parallel));
  CHECK(energy_kernel(a, Execution::serial) == energy_kernel(b, Execution::parallel));
  CHECK(el_kernel(a, Execution::serial) == el_kernel(b, Execution::parallel));
}
