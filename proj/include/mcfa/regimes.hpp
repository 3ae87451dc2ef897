#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcfa/evolution.hpp"
#include "mcfa/spherical_trajectory.hpp"

namespace mcfa {

enum class Verdict {
  not_locally_minimal_candidate,  ///< T < T_local
  local_minimizer,                ///< T_local ≤ T < T_global
  global_among_smooth,            ///< T_global ≤ T ≤ T_cross
  beaten_by_nucleation,           ///< T > T_cross
};

/// Stable key: "not-locally-minimal-candidate", "local-minimizer", ...
std::string verdict_key(Verdict v);

/// Connecting concentric spheres R0 → RT in time T (n = 2).
struct RegimeReport {
  double R0 = 0.0, RT = 0.0, T = 0.0;
  double T_mcf = 0.0;
  double T_local = 0.0;         ///< (√3/3)·T_MCF
  double T_global = 0.0;        ///< T_MCF
  double T_cross = 0.0;         ///< (R0 + RT)²/4
  double T_nuc_feasible = 0.0;  ///< max(R0², RT²)/4
  double S_smooth = 0.0;        ///< 16π(T_MCF²/T + T)
  double S_nucleation = 0.0;    ///< 8π(R0² + RT²)
  bool nucleation_feasible = false;
  Verdict verdict = Verdict::global_among_smooth;
  std::string statement;
  /// Below T_local: smallest λ_min over l ≤ 8 and its degree.
  std::optional<double> spectral_lambda_min;
  std::optional<int> spectral_degree;
};

struct ClassifyOptions {
  bool spectral_evidence = true;
  int l_max = 8;
};

RegimeReport classify(double R0, double RT, double T, const ClassifyOptions& options = {});

/// CSV with columns R0, RT, T, T_local, T_global, T_cross, S_smooth, S_nucleation, verdict.
void write_phase_csv(std::ostream& out, const std::vector<RegimeReport>& rows);

/// 16π(T_MCF²/T + T).
double smooth_optimal_action(double R0, double RT, double T);

/// 8π(R0² + RT²); either radius may be zero.
double nucleation_action(double R0, double RT);

/// 2 × total-variation distance of the area measures of two concentric spheres
/// (radius 0 is the empty measure).
double jump_cost(double R_minus, double R_plus, bool concentric = true);

/// One piece of a piecewise evolution on [t0, t1].
struct Segment {
  enum class Kind {
    trajectory,  ///< window [s0, s0 + (t1 − t0)] of a spherical trajectory
    mcf_arc,     ///< r² affine in t, moving at the (reversed) mean curvature flow speed
    vanished,    ///< no surface; zero action
  };
  Kind kind = Kind::vanished;
  double t0 = 0.0, t1 = 0.0;
  double r_start = 0.0, r_end = 0.0;
  std::optional<SphericalTrajectory> trajectory;
  double s0 = 0.0;
};

struct JumpEvent {
  double t = 0.0;
  double R_minus = 0.0, R_plus = 0.0;
  bool concentric = true;
};

/// Segments tiling [0, T], with jump events at segment junctions.
class PiecewiseEvolution {
 public:
  explicit PiecewiseEvolution(int n = 2) : n_(n) {}
  /// Raw pieces; nothing is checked until validate().
  PiecewiseEvolution(int n, std::vector<Segment> segments, std::vector<JumpEvent> jumps)
      : n_(n), segments_(std::move(segments)), jumps_(std::move(jumps)) {}

  int n() const { return n_; }
  double duration() const { return segments_.empty() ? 0.0 : segments_.back().t1; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<JumpEvent>& jumps() const { return jumps_; }

  /// Appends the window [s0, s1] of a trajectory (whole trajectory by default).
  PiecewiseEvolution& append_trajectory(const SphericalTrajectory& traj, double s0 = 0.0,
                                        std::optional<double> s1 = std::nullopt);
  /// Shrinking (r_end < r_start) or reversed growing arc; takes |r_start² − r_end²|/(2n).
  PiecewiseEvolution& append_mcf_arc(double r_start, double r_end);
  PiecewiseEvolution& append_vanished(double duration);
  /// Jump at the current end time from the last radius to R_plus.
  PiecewiseEvolution& append_jump(double R_plus, bool concentric = true);

  /// Throws StructureError on gaps, overlaps or unexplained radius changes.
  void validate() const;

  /// Shrink R0 to a point by mean curvature flow, wait, grow RT by reversed flow.
  /// Needs T ≥ (R0² + RT²)/(2n); T = 0 means exactly that time.
  static PiecewiseEvolution nucleation(int n, double R0, double RT, double T = 0.0);

 private:
  double end_radius() const;
  int n_;
  std::vector<Segment> segments_;
  std::vector<JumpEvent> jumps_;
};

/// Σ segment actions + Σ jump costs.
double piecewise_action(const PiecewiseEvolution& pw, CompositeConfig cfg = {});

/// S(ev) ≥ max_{|c|≤1} [8πc(R0² − RT²) + 16π(1 − c²)T] for n = 2.
struct LowerBoundCertificate {
  double action = 0.0;
  double bound = 0.0;
  double c_star = 0.0;
  double gap = 0.0;           ///< action − bound
  double relative_gap = 0.0;  ///< gap / bound
  bool holds = false;         ///< gap ≥ −tolerance·bound
};

double global_bound_value(double R0, double RT, double T);

LowerBoundCertificate global_lower_bound(const SphericalTrajectory& traj, double R0, double RT, double T,
                                         double tolerance = 1e-8);
/// The evolution's time grid must include both ends (uniform grid).
LowerBoundCertificate global_lower_bound(const Evolution& ev, double R0, double RT, double T,
                                         double tolerance = 1e-8);
LowerBoundCertificate global_lower_bound(const PiecewiseEvolution& pw, double R0, double RT, double T,
                                         double tolerance = 1e-8);

}  // namespace mcfa
