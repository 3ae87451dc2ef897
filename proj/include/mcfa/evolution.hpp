#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mcfa/geometry.hpp"
#include "mcfa/spherical_trajectory.hpp"

namespace mcfa {

enum class Execution { serial, parallel };

/// Time nodes with quadrature weights on [0, T].
struct TimeGrid {
  std::vector<double> t;
  std::vector<double> w;
  bool uniform = false;

  double duration() const { return t.back() - t.front(); }
  std::size_t size() const { return t.size(); }
  double step() const { return uniform ? t[1] - t[0] : 0.0; }

  /// `intervals` equal steps (even, >= 4), composite Simpson weights.
  static TimeGrid uniform_grid(double T, int intervals);
  /// Composite Gauss–Legendre nodes (endpoints excluded).
  static TimeGrid gauss(double T, int panels, int points);
};

/// Per-time, per-node scalar: values[k][i] at time t_k, grid node i.
using SpaceTimeField = std::vector<std::vector<double>>;
/// Callable (node index, t) -> value.
using SpaceTimeFunction = std::function<double(std::size_t, double)>;

struct EvolutionOptions {
  GeometryOptions geometry{};
  Execution execution = Execution::parallel;
};

/// A family of graphs r(·, t_k)·x on a shared sphere grid, with ∂_t r and the
/// induced geometry cached at every time node.
///
/// Normal velocity is v = ⟨∂_t φ, ν⟩ = ∂_t r · ⟨x, ν⟩; on round spheres this is −ṙ.
class Evolution {
 public:
  static Evolution sample(GridPtr grid, TimeGrid time, const SpaceTimeFunction& r,
                          const SpaceTimeFunction& r_t, const EvolutionOptions& options = {});
  /// ∂_t r from fourth-order differences; requires a uniform time grid.
  static Evolution from_radii(GridPtr grid, TimeGrid time, SpaceTimeField r,
                              const EvolutionOptions& options = {});
  /// Spatially constant fields following a spherical trajectory.
  static Evolution lift(const SphericalTrajectory& traj, GridPtr grid, TimeGrid time,
                        const EvolutionOptions& options = {});

  const GridPtr& grid() const { return grid_; }
  const TimeGrid& time() const { return time_; }
  int n() const { return grid_->dim(); }
  std::size_t steps() const { return time_.size(); }
  std::size_t nodes() const { return grid_->size(); }

  const RadialField& field(std::size_t k) const { return fields_[k]; }
  const SurfaceGeometry& geometry(std::size_t k) const { return geometry_[k]; }
  std::span<const double> radial_velocity(std::size_t k) const { return r_t_[k]; }
  std::span<const double> normal_velocity(std::size_t k) const { return v_[k]; }

 private:
  Evolution(GridPtr grid, TimeGrid time, SpaceTimeField r, SpaceTimeField r_t,
            const EvolutionOptions& options);

  GridPtr grid_;
  TimeGrid time_;
  std::vector<RadialField> fields_;
  std::vector<SurfaceGeometry> geometry_;
  SpaceTimeField r_t_;
  SpaceTimeField v_;
};

/// ρ · ⟨x, ν⟩: the normal part of the radial displacement ρ·x.
SpaceTimeField normal_component(const Evolution& ev, const SpaceTimeField& rho);

// Data-parallel kernels over time slices. The serial and parallel versions
// accumulate in the same order and agree bit for bit.

/// Σ_k w_k ∫ (v² + H²) dμ.
double action_kernel(const Evolution& ev, Execution exec);
/// ∫ (v² − H²) dμ at every time node.
std::vector<double> energy_kernel(const Evolution& ev, Execution exec);
/// −∂_t v + Δ H + H|A|² − H³/2 + v²H/2 at every node and time; uniform grids only.
SpaceTimeField el_kernel(const Evolution& ev, Execution exec);

}  // namespace mcfa
