#include "mcfa/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mcfa/errors.hpp"
#include "mcfa/stability.hpp"
#include "mcfa/variation.hpp"

namespace mcfa {

namespace {

// Every closed-form constant below is a multiple of the area of the unit 2-sphere.
const double kOmega2 = unit_sphere_area(2);

void require_positive(double R0, double RT, double T, const char* who) {
  if (!(R0 > 0.0) || !(RT > 0.0) || !(T > 0.0))
    throw DomainError(std::string(who) + ": R0, RT and T must be positive");
}

bool close(double a, double b, double rel = 1e-9) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

double window_action(const SphericalTrajectory& traj, double s0, double s1, CompositeConfig cfg) {
  const int n = traj.n();
  const double nn = static_cast<double>(n) * n;
  return unit_sphere_area(n) * integrate(
                                   [&](double t) {
                                     const double r = traj.r(t), d = traj.rdot(t);
                                     return d * d * std::pow(r, n) + nn * std::pow(r, n - 2);
                                   },
                                   s0, s1, cfg);
}

LowerBoundCertificate certify(double S, double R0, double RT, double T, double tolerance) {
  LowerBoundCertificate c;
  c.action = S;
  c.c_star = std::clamp((R0 * R0 - RT * RT) / (4.0 * T), -1.0, 1.0);
  c.bound = global_bound_value(R0, RT, T);
  c.gap = S - c.bound;
  c.relative_gap = c.gap / c.bound;
  c.holds = c.gap >= -tolerance * c.bound;
  return c;
}

}  // namespace

std::string verdict_key(Verdict v) {
  switch (v) {
    case Verdict::not_locally_minimal_candidate: return "not-locally-minimal-candidate";
    case Verdict::local_minimizer: return "local-minimizer";
    case Verdict::global_among_smooth: return "global-among-smooth";
    case Verdict::beaten_by_nucleation: return "beaten-by-nucleation";
  }
  return "unknown";
}

double smooth_optimal_action(double R0, double RT, double T) {
  require_positive(R0, RT, T, "smooth_optimal_action");
  const double Tm = mcf_time(2, R0, RT);
  return 4.0 * kOmega2 * (Tm * Tm / T + T);
}

double nucleation_action(double R0, double RT) {
  if (!(R0 >= 0.0) || !(RT >= 0.0)) throw DomainError("nucleation_action: radii must be non-negative");
  return 2.0 * kOmega2 * (R0 * R0 + RT * RT);
}

double jump_cost(double R_minus, double R_plus, bool concentric) {
  if (!concentric) throw UnsupportedError("jump_cost: only concentric spheres are modelled");
  if (!(R_minus >= 0.0) || !(R_plus >= 0.0)) throw DomainError("jump_cost: radii must be non-negative");
  if (R_minus == R_plus) return 0.0;
  // Distinct concentric spheres have disjoint supports, so the distance is the total mass.
  return 2.0 * kOmega2 * (R_minus * R_minus + R_plus * R_plus);
}

RegimeReport classify(double R0, double RT, double T, const ClassifyOptions& options) {
  require_positive(R0, RT, T, "classify");
  RegimeReport r;
  r.R0 = R0;
  r.RT = RT;
  r.T = T;
  r.T_mcf = mcf_time(2, R0, RT);
  r.T_local = std::sqrt(3.0) / 3.0 * r.T_mcf;
  r.T_global = r.T_mcf;
  r.T_cross = (R0 + RT) * (R0 + RT) / 4.0;
  r.T_nuc_feasible = std::max(R0 * R0, RT * RT) / 4.0;
  r.S_smooth = smooth_optimal_action(R0, RT, T);
  r.S_nucleation = nucleation_action(R0, RT);
  r.nucleation_feasible = T >= r.T_nuc_feasible;

  if (T > r.T_cross) {
    r.verdict = Verdict::beaten_by_nucleation;
    r.statement = "the nucleation path has strictly lower action than the smooth spherical connection";
    if (!r.nucleation_feasible) r.statement += " (nucleation marked infeasible for this T)";
  } else if (T >= r.T_global) {
    r.verdict = Verdict::global_among_smooth;
    r.statement = "the smooth spherical connection is the global minimizer among smooth evolutions";
  } else if (T >= r.T_local) {
    r.verdict = Verdict::local_minimizer;
    r.statement = "local minimizer; global status unknown";
  } else {
    r.verdict = Verdict::not_locally_minimal_candidate;
    r.statement =
        "below T_local: non-minimality is guaranteed only for sufficiently small T (some T1 <= T_local exists)";
    if (options.spectral_evidence) {
      const auto spec = mode_spectrum(closed_form_n2({2, R0, RT, T}, 64), options.l_max);
      const auto worst = std::min_element(spec.begin(), spec.end(), [](const auto& a, const auto& b) {
        return a.lambda_min < b.lambda_min;
      });
      r.spectral_lambda_min = worst->lambda_min;
      r.spectral_degree = worst->l;
      std::ostringstream s;
      s << "; smallest Rayleigh quotient over l <= " << options.l_max << " is " << worst->lambda_min << " at l = "
        << worst->l << (worst->lambda_min < 0.0 ? " (not a local minimizer)" : " (no negative mode found)");
      r.statement += s.str();
    }
  }
  return r;
}

void write_phase_csv(std::ostream& out, const std::vector<RegimeReport>& rows) {
  const auto old = out.precision(17);
  out << "R0,RT,T,T_local,T_global,T_cross,S_smooth,S_nucleation,verdict\n";
  for (const auto& r : rows) {
    out << r.R0 << ',' << r.RT << ',' << r.T << ',' << r.T_local << ',' << r.T_global << ',' << r.T_cross << ','
        << r.S_smooth << ',' << r.S_nucleation << ',' << verdict_key(r.verdict) << '\n';
  }
  out.precision(old);
}

double PiecewiseEvolution::end_radius() const {
  if (!jumps_.empty() && !segments_.empty() && jumps_.back().t >= segments_.back().t1) return jumps_.back().R_plus;
  return segments_.empty() ? 0.0 : segments_.back().r_end;
}

PiecewiseEvolution& PiecewiseEvolution::append_trajectory(const SphericalTrajectory& traj, double s0,
                                                          std::optional<double> s1) {
  if (traj.n() != n_) throw ShapeError("piecewise: trajectory dimension differs");
  const double e = s1.value_or(traj.duration());
  if (!(s0 >= 0.0) || !(e > s0) || e > traj.duration() * (1 + 1e-14))
    throw DomainError("piecewise: trajectory window outside [0, T]");
  Segment s;
  s.kind = Segment::Kind::trajectory;
  s.t0 = duration();
  s.t1 = s.t0 + (e - s0);
  s.r_start = traj.r(s0);
  s.r_end = traj.r(e);
  s.trajectory = traj;
  s.s0 = s0;
  segments_.push_back(std::move(s));
  return *this;
}

PiecewiseEvolution& PiecewiseEvolution::append_mcf_arc(double r_start, double r_end) {
  if (!(r_start >= 0.0) || !(r_end >= 0.0) || r_start == r_end)
    throw DomainError("piecewise: an arc needs distinct non-negative radii");
  Segment s;
  s.kind = Segment::Kind::mcf_arc;
  s.t0 = duration();
  s.t1 = s.t0 + mcf_time(n_, r_start, r_end);
  s.r_start = r_start;
  s.r_end = r_end;
  segments_.push_back(std::move(s));
  return *this;
}

PiecewiseEvolution& PiecewiseEvolution::append_vanished(double d) {
  if (!(d > 0.0)) throw DomainError("piecewise: duration must be positive");
  Segment s;
  s.kind = Segment::Kind::vanished;
  s.t0 = duration();
  s.t1 = s.t0 + d;
  segments_.push_back(std::move(s));
  return *this;
}

PiecewiseEvolution& PiecewiseEvolution::append_jump(double R_plus, bool concentric) {
  if (segments_.empty()) throw StructureError("piecewise: a jump needs a preceding segment");
  if (!(R_plus >= 0.0)) throw DomainError("piecewise: radius must be non-negative");
  jumps_.push_back({duration(), end_radius(), R_plus, concentric});
  return *this;
}

void PiecewiseEvolution::validate() const {
  if (segments_.empty()) throw StructureError("piecewise: no segments");
  const double T = duration();
  const double tol = 1e-12 * std::max(1.0, T);
  if (std::abs(segments_.front().t0) > tol) throw StructureError("piecewise: first segment does not start at 0");
  for (std::size_t j = 0; j < segments_.size(); ++j) {
    const auto& s = segments_[j];
    if (!(s.t1 > s.t0)) throw StructureError("piecewise: empty or reversed segment " + std::to_string(j));
    if (j > 0 && std::abs(s.t0 - segments_[j - 1].t1) > tol)
      throw StructureError("piecewise: gap or overlap before segment " + std::to_string(j));
  }
  for (const auto& jmp : jumps_) {
    const bool at_junction = std::any_of(segments_.begin(), segments_.end() - 1,
                                         [&](const Segment& s) { return std::abs(s.t1 - jmp.t) <= tol; });
    if (!at_junction) throw StructureError("piecewise: jump at t = " + std::to_string(jmp.t) + " is not at a junction");
  }
  for (std::size_t j = 1; j < segments_.size(); ++j) {
    const double t = segments_[j].t0;
    double r = segments_[j - 1].r_end;
    for (const auto& jmp : jumps_) {
      if (std::abs(jmp.t - t) > tol) continue;
      if (!close(jmp.R_minus, r)) throw StructureError("piecewise: jump does not start from the incoming radius");
      r = jmp.R_plus;
    }
    if (!close(r, segments_[j].r_start))
      throw StructureError("piecewise: radius changes at t = " + std::to_string(t) + " without a jump");
  }
}

PiecewiseEvolution PiecewiseEvolution::nucleation(int n, double R0, double RT, double T) {
  if (!(R0 > 0.0) || !(RT > 0.0)) throw DomainError("nucleation: radii must be positive");
  const double shrink = mcf_time(n, R0, 0.0), grow = mcf_time(n, 0.0, RT);
  const double wait = T == 0.0 ? 0.0 : T - shrink - grow;
  if (wait < -1e-12 * std::max(1.0, T))
    throw InfeasibleError("nucleation: sequential shrink and growth need T >= " + std::to_string(shrink + grow));
  PiecewiseEvolution pw(n);
  pw.append_mcf_arc(R0, 0.0);
  if (wait > 1e-12 * std::max(1.0, T)) pw.append_vanished(wait);
  pw.append_mcf_arc(0.0, RT);
  return pw;
}

double piecewise_action(const PiecewiseEvolution& pw, CompositeConfig cfg) {
  pw.validate();
  const int n = pw.n();
  double S = 0.0;
  for (const auto& s : pw.segments()) {
    switch (s.kind) {
      case Segment::Kind::trajectory:
        S += window_action(*s.trajectory, s.s0, s.s0 + (s.t1 - s.t0), cfg);
        break;
      case Segment::Kind::mcf_arc:
        // v² + H² = 2n²/r², and r² moves linearly at rate 2n: 2ω_n |r_startⁿ − r_endⁿ|.
        S += 2.0 * unit_sphere_area(n) * std::abs(std::pow(s.r_start, n) - std::pow(s.r_end, n));
        break;
      case Segment::Kind::vanished:
        break;
    }
  }
  for (const auto& j : pw.jumps()) {
    if (!j.concentric) throw UnsupportedError("piecewise_action: only concentric jumps are modelled");
    if (j.R_minus != j.R_plus) S += 2.0 * unit_sphere_area(n) * (std::pow(j.R_minus, n) + std::pow(j.R_plus, n));
  }
  return S;
}

double global_bound_value(double R0, double RT, double T) {
  require_positive(R0, RT, T, "global_bound_value");
  const double c = std::clamp((R0 * R0 - RT * RT) / (4.0 * T), -1.0, 1.0);
  return 2.0 * kOmega2 * c * (R0 * R0 - RT * RT) + 4.0 * kOmega2 * (1.0 - c * c) * T;
}

LowerBoundCertificate global_lower_bound(const SphericalTrajectory& traj, double R0, double RT, double T,
                                         double tolerance) {
  if (traj.n() != 2) throw UnsupportedError("global_lower_bound: n = 2 only");
  if (!close(traj.duration(), T, 1e-12) || !close(traj.r(0.0), R0, 1e-8) || !close(traj.r(T), RT, 1e-8))
    throw PreconditionError("global_lower_bound: trajectory does not connect the given spheres");
  return certify(spherical_action(traj), R0, RT, T, tolerance);
}

LowerBoundCertificate global_lower_bound(const Evolution& ev, double R0, double RT, double T, double tolerance) {
  if (ev.n() != 2) throw UnsupportedError("global_lower_bound: n = 2 only");
  const auto& tg = ev.time();
  if (std::abs(tg.t.front()) > 1e-12 * T || !close(tg.t.back(), T, 1e-12))
    throw PreconditionError("global_lower_bound: the time grid must contain t = 0 and t = T");
  for (double r : ev.field(0).values())
    if (!close(r, R0, 1e-8)) throw PreconditionError("global_lower_bound: initial surface is not the sphere R0");
  for (double r : ev.field(ev.steps() - 1).values())
    if (!close(r, RT, 1e-8)) throw PreconditionError("global_lower_bound: final surface is not the sphere RT");
  return certify(action(ev), R0, RT, T, tolerance);
}

LowerBoundCertificate global_lower_bound(const PiecewiseEvolution& pw, double R0, double RT, double T,
                                         double tolerance) {
  if (pw.n() != 2) throw UnsupportedError("global_lower_bound: n = 2 only");
  pw.validate();
  double start = pw.segments().front().r_start, end = pw.segments().back().r_end;
  if (!close(pw.duration(), T, 1e-12) || !close(start, R0, 1e-8) || !close(end, RT, 1e-8))
    throw PreconditionError("global_lower_bound: piecewise evolution does not connect the given spheres");
  return certify(piecewise_action(pw), R0, RT, T, tolerance);
}

}  // namespace mcfa
