#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "mcfa/evolution.hpp"
#include "mcfa/quadrature.hpp"
#include "mcfa/spherical_trajectory.hpp"

namespace mcfa {

/// Potential coefficient of degree l around the optimal n = 2 connection:
/// 4(2 − l(l+1))κ² + 2((l(l+1) − 1)² − 1) with κ = T_MCF / T.
double mode_coefficient(int l, double T, double T_mcf);

/// Time profile η with η(0) = η(T) = 0.
struct TimeProfile {
  std::function<double(double)> eta;
  std::function<double(double)> eta_dot;
};

/// Σ_j a_j sin(jπt/T), j = 1, 2, ...
TimeProfile sine_profile(std::vector<double> amplitudes, double T);

/// Radial perturbation ε·η(t)·ψ_l(x), ψ_l = √(4π)·Y_l0 (so ∫ψ_l² dμ̂ = 4π).
struct ModePerturbation {
  int l = 0;
  TimeProfile profile;
};

/// The two parts of 4π ∫ [2η̇²r0² + (η²/r0²)·c(l)] dt.
struct ModeForm {
  double kinetic = 0.0;
  double potential = 0.0;
  double value() const { return kinetic + potential; }
};

/// d²S/dε² for r0 + εη ψ_l around an optimal n = 2 trajectory. T_MCF is
/// taken from the trajectory's end radii.
ModeForm second_variation_mode(const SphericalTrajectory& r0, const ModePerturbation& pert,
                               CompositeConfig cfg = {});

/// The seven integrands of the second variation for r0 + ερ (any n), plus the
/// divergence ∇̂·(ρ∇̂ρ) weighted by r0^{n−4}(12n − 4n²), which integrates to zero.
struct GeneralSecondVariation {
  double value = 0.0;
  std::vector<double> terms;  ///< in the order of the integrand, 7 entries
  double divergence_term = 0.0;
};

/// ρ, ρ_t are sampled on `grid` at the nodes of `time`; ρ must vanish at both ends.
GeneralSecondVariation second_variation_general(const SphericalTrajectory& r0, GridPtr grid,
                                                const TimeGrid& time, const SpaceTimeFunction& rho,
                                                const SpaceTimeFunction& rho_t,
                                                double endpoint_tolerance = 1e-12);

struct RayleighOptions {
  int initial_elements = 64;
  int max_elements = 8192;
  double tolerance = 1e-6;       ///< relative eigenvalue change accepted as converged
  double warn_tolerance = 1e-4;  ///< last relative change above this raises coarse_grid
};

/// Smallest value of Q_l(η) / ∫η² dt over endpoint-zero η, by piecewise-linear
/// elements on a uniform grid refined by doubling.
struct QuadraticFormReport {
  int l = 0;
  double coefficient = 0.0;   ///< c(l)
  double lambda_min = 0.0;
  std::vector<double> times;  ///< element nodes including both ends
  std::vector<double> eta;    ///< minimizer, ∫η² dt = 1 in the discrete mass
  int elements = 0;
  double last_change = 0.0;   ///< relative change at the final refinement
  bool converged = false;
  bool coarse_grid = false;
};

QuadraticFormReport min_rayleigh(int l, const SphericalTrajectory& r0, const RayleighOptions& options = {});

/// min_rayleigh for l = 0..l_max, computed concurrently.
std::vector<QuadraticFormReport> mode_spectrum(const SphericalTrajectory& r0, int l_max,
                                               const RayleighOptions& options = {});

/// CSV with columns l, c_l, lambda_min, T, T_MCF, kappa.
void write_spectrum_csv(std::ostream& out, const std::vector<QuadraticFormReport>& spectrum, double T,
                        double T_mcf);

/// Sign change of min_{l ≤ l_max} λ_min(l) as T varies with R0, RT fixed.
struct ThresholdReport {
  bool found = false;
  double T_indefinite = 0.0;  ///< largest probed T with a negative mode
  double T_definite = 0.0;    ///< smallest probed T with no negative mode
  int binding_l = -1;         ///< degree of the negative mode at T_indefinite
  double T_local = 0.0;       ///< (√3/3)·T_MCF
};

ThresholdReport locate_threshold(double R0, double RT, int l_max = 8, double relative_width = 1e-3,
                                 const RayleighOptions& options = {});

}  // namespace mcfa
