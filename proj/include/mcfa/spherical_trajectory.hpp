#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcfa/quadrature.hpp"

namespace mcfa {

/// Concentric spheres of radii R0 (t = 0) and RT (t = T) in R^{n+1}.
struct BoundaryData {
  int n = 2;
  double R0 = 1.0;
  double RT = 1.0;
  double T = 1.0;

  /// Throws DomainError unless n >= 1 and R0, RT, T > 0.
  void validate() const;
};

/// Time for (reversed) mean curvature flow of spheres to join R0 and RT: |R0² − RT²| / (2n).
double mcf_time(int n, double R0, double RT);

/// Exact r, ṙ, r̈ of a round-sphere evolution, when known in closed form.
struct TrajectoryFunctions {
  std::function<double(double)> r;
  std::function<double(double)> rdot;
  std::function<double(double)> rddot;
};

/// Round spheres r(t)·x, t ∈ [0, T], sampled on a uniform grid.
///
/// Between samples the trajectory is a quintic Hermite interpolant in (r, ṙ, r̈),
/// unless exact functions were supplied, in which case those are used.
class SphericalTrajectory {
 public:
  static SphericalTrajectory from_functions(int n, double T, TrajectoryFunctions f,
                                            int intervals = 1024, std::string origin = "analytic");
  /// Uniform samples of r, ṙ, r̈ over [0, T].
  static SphericalTrajectory from_samples(int n, double T, std::vector<double> r,
                                          std::vector<double> rdot, std::vector<double> rddot,
                                          std::string origin = "samples");
  static SphericalTrajectory static_sphere(int n, double R, double T, int intervals = 64);

  int n() const { return n_; }
  double duration() const { return T_; }
  std::size_t size() const { return t_.size(); }
  double step() const { return T_ / static_cast<double>(t_.size() - 1); }
  std::span<const double> times() const { return t_; }
  std::span<const double> radius() const { return r_; }
  std::span<const double> velocity() const { return rdot_; }
  /// Curvature samples used by the interpolant.
  std::span<const double> acceleration() const { return rddot_; }
  bool has_exact() const { return exact_.has_value(); }
  const std::string& origin() const { return origin_; }

  double r(double t) const;
  double rdot(double t) const;
  double rddot(double t) const;

  /// ṙ²rⁿ − n²r^{n−2} at t = 0.
  double energy_constant() const;
  /// ṙ²rⁿ − n²r^{n−2} at every sample.
  std::vector<double> energy_constant_samples() const;

  /// The same spheres traversed backwards: t ↦ T − t.
  SphericalTrajectory reversed() const;

  /// CSV with columns t, r, rdot, energy_density, action_density (densities include ω_n).
  void write_csv(std::ostream& out) const;

 private:
  SphericalTrajectory() = default;
  std::size_t segment(double t, double& s) const;

  int n_ = 2;
  double T_ = 1.0;
  std::vector<double> t_, r_, rdot_, rddot_;
  std::optional<TrajectoryFunctions> exact_;
  std::string origin_;
};

/// The stationary n = 2 connection r(t) = sqrt(R0² + (RT² − R0²) t / T).
SphericalTrajectory closed_form_n2(const BoundaryData& bd, int intervals = 1024);

/// 2r̈rⁿ + nṙ²r^{n−1} − n²(n−2)r^{n−3} at each sample. Exact r̈ is used when the
/// trajectory carries it; otherwise r̈ is the fourth-order difference of ṙ.
std::vector<double> el_residual_spherical(const SphericalTrajectory& traj);

/// Right-hand side of the stationarity ODE solved for r̈.
double stationary_acceleration(int n, double r, double rdot);

struct BvpOptions {
  CompositeConfig quadrature{};
  int intervals = 1024;          ///< uniform output samples − 1
  double ode_tolerance = 1e-13;  ///< absolute and relative, adaptive Runge–Kutta–Fehlberg 7(8)
  double time_tolerance = 1e-13; ///< relative tolerance on the time of flight
  int scan_points = 96;          ///< samples per turning-point scan
};

enum class BvpBranch { static_sphere, monotone, turning };

struct BvpSolution {
  SphericalTrajectory trajectory;
  BvpBranch branch;
  double energy_constant;       ///< E_c = ṙ²rⁿ − n²r^{n−2}
  double turning_radius;        ///< NaN unless branch == turning
  double time_of_flight;        ///< quadrature value at the accepted E_c
  double boundary_mismatch;     ///< |r(T) − RT| of the integrated trajectory
  double action;
};

/// Every stationary spherical connection found (monotone or with one turning
/// point), sorted by increasing action. Throws InfeasibleError if there is none.
std::vector<BvpSolution> solve_bvp_all(const BoundaryData& bd, const BvpOptions& options = {});

/// The least-action connection from solve_bvp_all.
SphericalTrajectory solve_bvp(const BoundaryData& bd, const BvpOptions& options = {});

/// Time of flight from R0 to RT for energy constant E along a monotone path
/// (infinite when the path is not admissible).
double monotone_time_of_flight(const BoundaryData& bd, double E, CompositeConfig cfg = {});

/// Time of flight of the path that turns once at radius r_turn.
double turning_time_of_flight(const BoundaryData& bd, double r_turn, CompositeConfig cfg = {});

/// ω_n ∫₀ᵀ (ṙ²rⁿ + n²r^{n−2}) dt.
double spherical_action(const SphericalTrajectory& traj, CompositeConfig cfg = {});

/// ω_n (ṙ²rⁿ − n²r^{n−2}) at time t.
double energy(const SphericalTrajectory& traj, double t);

}  // namespace mcfa
