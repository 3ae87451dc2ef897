#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mcfa/errors.hpp"
#include "mcfa/quadrature.hpp"
#include "mcfa/sphere_grid.hpp"
#include "test_support.hpp"

using namespace mcfa;
using mcfa::test::max_abs_diff;

constexpr double kPi = std::numbers::pi;

TEST_CASE("quadrature weights sum to the sphere area") {
  CHECK(SphereGrid::sphere2(16)->total_weight() == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(SphereGrid::circle(16)->total_weight() == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(SphereGrid::symmetric(5)->total_weight() == doctest::Approx(unit_sphere_area(5)).epsilon(1e-12));
}

TEST_CASE("harmonics integrate to zero except degree zero") {
  auto g = SphereGrid::sphere2(16);
  for (int l = 1; l <= 16; ++l)
    for (int m = -l; m <= l; ++m) CHECK(std::abs(g->integrate(g->harmonic(l, m))) < 1e-13);
  CHECK(g->integrate(g->harmonic(0)) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-13));

  auto c = SphereGrid::circle(12);
  for (int k = 1; k <= 12; ++k) CHECK(std::abs(c->integrate(c->harmonic(k, 1))) < 1e-13);
}

TEST_CASE("harmonics are orthonormal on the quadrature") {
  auto g = SphereGrid::sphere2(6);
  std::vector<std::vector<double>> ys;
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) ys.push_back(g->harmonic(l, m));
  for (std::size_t a = 0; a < ys.size(); ++a) {
    for (std::size_t b = a; b < ys.size(); ++b) {
      std::vector<double> prod(g->size());
      for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = ys[a][i] * ys[b][i];
      CHECK(std::abs(g->integrate(prod) - (a == b ? 1.0 : 0.0)) < 1e-13);
    }
  }
}

TEST_CASE("Laplace-Beltrami eigenvalues") {
  auto g = SphereGrid::sphere2(16);
  for (int l : {0, 1, 2, 5}) {
    const auto y = g->harmonic(l, l > 0 ? 1 : 0);
    const auto ly = g->laplace_beltrami(y);
    std::vector<double> want(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) want[i] = -l * (l + 1.0) * y[i];
    CHECK(max_abs_diff(ly, want) < 1e-8);
  }
  const std::vector<double> one(g->size(), 3.0);
  CHECK(mcfa::test::max_abs(g->laplace_beltrami(one)) < 1e-10);

  // frame Hessian trace agrees with the spectral Laplacian
  const auto y3 = g->harmonic(3, -2);
  const auto d = g->differentiate(y3);
  for (std::size_t i = 0; i < y3.size(); ++i) CHECK(std::abs(d.hessian[i][0] + d.hessian[i][2] - d.laplacian[i]) < 1e-10);

  auto c = SphereGrid::circle(8);
  const auto ck = c->harmonic(3);
  const auto lc = c->laplace_beltrami(ck);
  for (std::size_t i = 0; i < ck.size(); ++i) CHECK(lc[i] == doctest::Approx(-9.0 * ck[i]).epsilon(1e-10));
}

TEST_CASE("frame derivatives of a linear function restricted to the sphere") {
  // f = <a, x>: ∇̂f = a_tangent, ∇̂²f = -f θ
  auto g = SphereGrid::sphere2(4);
  Eigen::Vector3d a(0.3, -1.2, 0.7);
  const auto f = g->sample([&](const Eigen::VectorXd& x) { return a.dot(x); });
  const auto d = g->differentiate(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Eigen::MatrixXd e = g->frame(i);
    CHECK(d.gradient[i][0] == doctest::Approx(a.dot(e.col(0))).epsilon(1e-12));
    CHECK(d.gradient[i][1] == doctest::Approx(a.dot(e.col(1))).epsilon(1e-12));
    CHECK(std::abs(d.hessian[i][0] + f[i]) < 1e-12);
    CHECK(std::abs(d.hessian[i][1]) < 1e-12);
    CHECK(std::abs(d.hessian[i][2] + f[i]) < 1e-12);
  }
}

TEST_CASE("band-limited fields round-trip through analysis and synthesis") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  for (GridPtr g : {SphereGrid::sphere2(10), SphereGrid::circle(10)}) {
    std::vector<double> coeff(g->coefficient_count());
    for (double& c : coeff) c = nd(rng);
    const auto f = g->synthesize(coeff);
    const auto back = g->analyze(f);
    CHECK(max_abs_diff(coeff, back) < 1e-12);
    CHECK(g->truncation_residual(f) < 1e-12);
  }
}

TEST_CASE("resolution errors") {
  CHECK_THROWS_AS(SphereGrid::sphere2(16, 10, 40), ResolutionError);
  CHECK_THROWS_AS(SphereGrid::circle(16, 20), ResolutionError);
  CHECK_THROWS_AS(SphereGrid::sphere2(4)->harmonic(5), ResolutionError);
  auto g = SphereGrid::sphere2(4);
  CHECK_THROWS_AS(g->integrate(std::vector<double>(3, 1.0)), ShapeError);
  // a field that is not band-limited shows a truncation residual
  const auto f = g->sample([](const Eigen::VectorXd& x) { return std::exp(3.0 * x(2)); });
  CHECK(g->truncation_residual(f) > 1e-6);
}
