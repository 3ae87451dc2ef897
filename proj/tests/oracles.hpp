#pragma once

// Independent reference computations shared by the unit tests and the acceptance runner.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mcfa/stability.hpp"
#include "mcfa/variation.hpp"

namespace mcfa::test {

/// Five-point central second derivative of s at 0.
inline double second_difference5(const std::function<double(double)>& s, double eps) {
  return (-s(2 * eps) + 16 * s(eps) - 30 * s(0.0) + 16 * s(-eps) - s(-2 * eps)) / (12 * eps * eps);
}

/// Full action of r0 + ε η(t) √(4π) Y_l0 on a spectral S² grid.
inline double mode_perturbed_action(const SphericalTrajectory& r0, const ModePerturbation& p, double eps,
                                    const GridPtr& grid, const TimeGrid& time) {
  std::vector<double> psi = grid->harmonic(p.l, 0);
  for (double& v : psi) v *= std::sqrt(4 * std::numbers::pi);
  return action(Evolution::sample(
      grid, time, [&](std::size_t i, double t) { return r0.r(t) + eps * p.profile.eta(t) * psi[i]; },
      [&](std::size_t i, double t) { return r0.rdot(t) + eps * p.profile.eta_dot(t) * psi[i]; }));
}

/// Random smooth endpoint-zero profile: three sine modes with amplitudes in [−1, 1].
inline TimeProfile random_profile(std::mt19937_64& rng, double T) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return sine_profile({u(rng), 0.5 * u(rng), 0.25 * u(rng)}, T);
}

/// Smallest Rayleigh quotient of the mode form over span{sin(jπt/T), j ≤ J}, by a
/// dense generalized eigen-solve. Independent of the element discretization.
inline double sine_galerkin_min(int l, const SphericalTrajectory& r0, int J = 48) {
  const double T = r0.duration();
  const double c = mode_coefficient(l, T, mcf_time(2, r0.r(0.0), r0.r(T)));
  const auto rule = composite_gauss_legendre(0.0, T, 4 * J, 8);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(J, J), B = A;
  const double w = std::numbers::pi / T;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = rule.nodes[q], r = r0.r(t);
    Eigen::VectorXd s(J), ds(J);
    for (int j = 0; j < J; ++j) {
      s(j) = std::sin((j + 1) * w * t);
      ds(j) = (j + 1) * w * std::cos((j + 1) * w * t);
    }
    A += rule.weights[q] * 4 * std::numbers::pi * (2 * r * r * ds * ds.transpose() + c / (r * r) * s * s.transpose());
    B += rule.weights[q] * s * s.transpose();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  return es.eigenvalues()(0);
}

}  // namespace mcfa::test
