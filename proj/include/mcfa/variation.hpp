#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcfa/evolution.hpp"

namespace mcfa {

/// S = ∫∫ (v² + H²) dμ dt by the evolution's time quadrature.
double action(const Evolution& ev);

/// −∂_t v (following the normal motion) + ΔH + H|A|² − H³/2 + v²H/2 per time node and grid node.
SpaceTimeField el_residual(const Evolution& ev);

/// dS/dε in the normal direction f: 2 ∫∫ f · (el_residual) dμ dt.
/// f must vanish at the first and last time node.
double first_variation_pairing(const Evolution& ev, const SpaceTimeField& f,
                               double endpoint_tolerance = 1e-12);

/// Central-difference check of the variation formulae for δφ = f ν, realized
/// as the radial displacement (f / ⟨x, ν⟩)·x; the tangential part τ of that
/// displacement is accounted for in the expected values.
struct VariationCheck {
  double epsilon = 0.0;
  double measure = 0.0;         ///< δ dμ  vs (−H f + div τ) dμ
  double normal = 0.0;          ///< δν    vs −∇f + D_τ ν
  double mean_curvature = 0.0;  ///< δH    vs Δf + f|A|² + τ(H)
  double velocity = 0.0;        ///< δv    vs ∂_t(t f) on a static base
  double max_error() const;
};

VariationCheck variation_formula_checks(const RadialField& r, std::span<const double> f,
                                        double epsilon = 1e-4,
                                        const GeometryOptions& options = {});

/// ∫ (v² − H²) dμ at time node k.
double energy_general(const Evolution& ev, std::size_t k);
std::vector<double> energy_general(const Evolution& ev);

/// ∫ v (ν ⊗ φ − φ ⊗ ν) dμ at time node k; antisymmetric (n+1)×(n+1).
Eigen::MatrixXd angular_momentum(const Evolution& ev, std::size_t k);

struct ConformalOptions {
  double stationarity_tolerance = 1e-5;  ///< max |el_residual| accepted as stationary
  double tolerance = 1e-6;               ///< relative to the action
};

/// Dilation identity along a stationary evolution. Both the integrated form
/// [∫ v⟨φ,ν⟩ dμ]₀ᵀ = 2TE + nS (as usually quoted) and the value that the
/// dilation computation actually yields, TE + (n/2)S, are evaluated, together
/// with their per-time versions.
struct ConformalReport {
  double el_residual_max = 0.0;
  double flux_change = 0.0;   ///< [∫ v⟨φ,ν⟩ dμ]₀ᵀ
  double time_energy = 0.0;   ///< ∫₀ᵀ E dt (= T·E when E is conserved)
  double action = 0.0;
  double quoted_rhs = 0.0;    ///< 2TE + nS
  double derived_rhs = 0.0;   ///< TE + (n/2)S
  double quoted_error = 0.0;  ///< |flux_change − quoted_rhs| / S
  double derived_error = 0.0;
  double quoted_rate_error = 0.0;   ///< sup_t |d/dt flux − (2E + (n/2)∫(v²+H²))| / sup|d/dt flux terms|
  double derived_rate_error = 0.0;  ///< same with E + (n/2)∫(v²+H²)
  bool quoted_holds = false;       ///< integrated form only
  bool derived_holds = false;
  bool quoted_rate_holds = false;
  bool derived_rate_holds = false;
};

/// Throws PreconditionError (with residual diagnostics) unless the input is stationary.
ConformalReport conformal_identity_check(const Evolution& ev, const ConformalOptions& options = {});

}  // namespace mcfa
