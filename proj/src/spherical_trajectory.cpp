#include "mcfa/spherical_trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "mcfa/errors.hpp"
#include "mcfa/finite_difference.hpp"

namespace mcfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_times(double T, int intervals) {
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) t[k] = T * k / intervals;
  t.back() = T;
  return t;
}

// (r^m − c^m) / (r − c) without cancellation, for the exponents m = n − 2 >= −1 that occur.
double power_quotient(int m, double r, double c) {
  if (m == 0) return 0.0;
  if (m == -1) return -1.0 / (r * c);
  double sum = 0.0, rp = 1.0;
  for (int k = 0; k < m; ++k) {
    sum = sum * c + rp;
    rp *= r;
  }
  return sum;  // Σ_k r^k c^{m-1-k}
}

double power_quotient_at(int m, double c) {
  return m == 0 ? 0.0 : m * std::pow(c, m - 1);
}

// A candidate connection: energy constant plus the data needed to evaluate ṙ² without cancellation.
struct Candidate {
  BvpBranch branch;
  double E;
  double delta = 0.0;  // monotone: E − E_lo
  double pivot = 0.0;  // monotone: critical endpoint; turning: turning radius
  double time = 0.0;
};

// E + n² r^{n−2} for a candidate, evaluated as a sum of non-negative terms.
double kinetic_numerator(int n, const Candidate& c, double r) {
  if (c.branch == BvpBranch::static_sphere) return 0.0;
  if (n == 2) return c.delta;
  const double q = std::abs(power_quotient(n - 2, r, c.pivot)) * std::abs(r - c.pivot);
  return (c.branch == BvpBranch::monotone ? c.delta : 0.0) + n * n * q;
}

double critical_endpoint(const BoundaryData& bd) {
  return bd.n == 1 ? std::max(bd.R0, bd.RT) : std::min(bd.R0, bd.RT);
}

double lower_energy(const BoundaryData& bd) {
  if (bd.n == 2) return -4.0;
  return -static_cast<double>(bd.n * bd.n) * std::pow(critical_endpoint(bd), bd.n - 2);
}

// ∫ between R and the turning radius of dr / |ṙ|, with r = rs + dir·s².
double half_flight(int n, double R, double rs, CompositeConfig cfg) {
  const double dir = R >= rs ? 1.0 : -1.0;
  const double smax = std::sqrt(std::abs(R - rs));
  if (smax == 0.0) return 0.0;
  auto f = [&](double s) {
    const double r = rs + dir * s * s;
    return 2.0 * std::pow(r, 0.5 * n) / (n * std::sqrt(std::abs(power_quotient(n - 2, r, rs))));
  };
  return integrate(f, 0.0, smax, cfg);
}

double monotone_flight_delta(const BoundaryData& bd, double delta, CompositeConfig cfg) {
  const int n = bd.n;
  const double a = std::min(bd.R0, bd.RT), b = std::max(bd.R0, bd.RT);
  if (a == b) return 0.0;
  if (delta < 0.0) return kInf;
  if (n == 2) {
    if (delta == 0.0) return kInf;
    return integrate([&](double r) { return r / std::sqrt(delta); }, a, b, cfg);
  }
  const double c = critical_endpoint(bd);
  if (delta == 0.0) return half_flight(n, c == a ? b : a, c, cfg);
  const double dir = c == a ? 1.0 : -1.0;
  const double smax = std::sqrt(b - a);
  // s = σ sinh u absorbs the √(δ + k s²) boundary layer at the critical end.
  const double sigma = std::sqrt(delta / (n * n * std::abs(power_quotient_at(n - 2, c))));
  const double umax = std::asinh(smax / sigma);
  auto f = [&](double u) {
    const double s = sigma * std::sinh(u);
    const double r = c + dir * s * s;
    const double g = delta + n * n * std::abs(power_quotient(n - 2, r, c)) * s * s;
    return 2.0 * s * sigma * std::cosh(u) * std::pow(r, 0.5 * n) / std::sqrt(g);
  };
  return integrate(f, 0.0, umax, cfg);
}

void check_boundary(const BoundaryData& bd) { bd.validate(); }

struct StationaryOde {
  int n;
  void operator()(const std::array<double, 2>& x, std::array<double, 2>& dx, double) const {
    dx[0] = x[1];
    dx[1] = stationary_acceleration(n, x[0], x[1]);
  }
};

SphericalTrajectory integrate_candidate(const BoundaryData& bd, const Candidate& c,
                                        const BvpOptions& opt) {
  const int n = bd.n;
  if (c.branch == BvpBranch::static_sphere) return SphericalTrajectory::static_sphere(n, bd.R0, bd.T, opt.intervals);
  double sign;
  if (c.branch == BvpBranch::monotone) {
    sign = bd.RT > bd.R0 ? 1.0 : -1.0;
  } else {
    sign = n == 1 ? 1.0 : -1.0;
  }
  const double v0 = sign * std::sqrt(kinetic_numerator(n, c, bd.R0) / std::pow(bd.R0, n));
  auto times = uniform_times(bd.T, opt.intervals);
  std::vector<double> r, rdot, rddot;
  r.reserve(times.size());
  rdot.reserve(times.size());
  std::array<double, 2> x{bd.R0, v0};
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(opt.ode_tolerance, opt.ode_tolerance,
                                      ode::runge_kutta_fehlberg78<std::array<double, 2>>());
  ode::integrate_times(stepper, StationaryOde{n}, x, times.begin(), times.end(), bd.T / opt.intervals,
                       [&](const std::array<double, 2>& s, double) {
                         r.push_back(s[0]);
                         rdot.push_back(s[1]);
                       });
  rddot.resize(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) rddot[k] = stationary_acceleration(n, r[k], rdot[k]);
  return SphericalTrajectory::from_samples(n, bd.T, std::move(r), std::move(rdot), std::move(rddot),
                                           c.branch == BvpBranch::monotone ? "bvp-monotone" : "bvp-turning");
}

template <class F>
double refine_root(F&& f, double lo, double hi, double flo, double fhi) {
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  auto [x0, x1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  const double m = 0.5 * (x0 + x1);
  return m;
}

std::string describe(const BoundaryData& bd) {
  std::ostringstream s;
  s.precision(10);
  s << "n=" << bd.n << " R0=" << bd.R0 << " RT=" << bd.RT << " T=" << bd.T;
  return s.str();
}

}  // namespace

void BoundaryData::validate() const {
  if (n < 1) throw DomainError("boundary data: n must be >= 1");
  if (!(R0 > 0.0) || !(RT > 0.0) || !(T > 0.0))
    throw DomainError("boundary data: R0, RT and T must be positive (" + describe(*this) + ")");
}

double mcf_time(int n, double R0, double RT) {
  if (n < 1) throw DomainError("mcf_time: n must be >= 1");
  return std::abs(R0 * R0 - RT * RT) / (2.0 * n);
}

SphericalTrajectory SphericalTrajectory::from_functions(int n, double T, TrajectoryFunctions f,
                                                        int intervals, std::string origin) {
  if (intervals < 4) throw ShapeError("trajectory: need at least 4 intervals");
  auto t = uniform_times(T, intervals);
  std::vector<double> r(t.size()), v(t.size()), a(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    r[k] = f.r(t[k]);
    v[k] = f.rdot(t[k]);
    a[k] = f.rddot(t[k]);
  }
  auto traj = from_samples(n, T, std::move(r), std::move(v), std::move(a), std::move(origin));
  traj.exact_ = std::move(f);
  return traj;
}

SphericalTrajectory SphericalTrajectory::from_samples(int n, double T, std::vector<double> r,
                                                      std::vector<double> rdot,
                                                      std::vector<double> rddot, std::string origin) {
  if (n < 1) throw DomainError("trajectory: n must be >= 1");
  if (!(T > 0.0)) throw DomainError("trajectory: T must be positive");
  if (r.size() < 5 || rdot.size() != r.size() || rddot.size() != r.size())
    throw ShapeError("trajectory: need matching r, rdot, rddot with at least 5 samples");
  for (double x : r)
    if (!(x > 0.0)) throw DomainError("trajectory: non-positive radius");
  SphericalTrajectory traj;
  traj.n_ = n;
  traj.T_ = T;
  traj.t_ = uniform_times(T, static_cast<int>(r.size()) - 1);
  traj.r_ = std::move(r);
  traj.rdot_ = std::move(rdot);
  traj.rddot_ = std::move(rddot);
  traj.origin_ = std::move(origin);
  return traj;
}

SphericalTrajectory SphericalTrajectory::static_sphere(int n, double R, double T, int intervals) {
  return from_functions(
      n, T, {[R](double) { return R; }, [](double) { return 0.0; }, [](double) { return 0.0; }},
      intervals, "static");
}

std::size_t SphericalTrajectory::segment(double t, double& s) const {
  const double h = step();
  const std::size_t last = t_.size() - 2;
  const double x = std::clamp(t, 0.0, T_) / h;
  const std::size_t k = std::min(static_cast<std::size_t>(x), last);
  s = x - static_cast<double>(k);
  return k;
}

double SphericalTrajectory::r(double t) const {
  if (exact_) return exact_->r(t);
  double s;
  const auto k = segment(t, s);
  return QuinticSegment(step(), r_[k], rdot_[k], rddot_[k], r_[k + 1], rdot_[k + 1], rddot_[k + 1]).value(s);
}

double SphericalTrajectory::rdot(double t) const {
  if (exact_) return exact_->rdot(t);
  double s;
  const auto k = segment(t, s);
  return QuinticSegment(step(), r_[k], rdot_[k], rddot_[k], r_[k + 1], rdot_[k + 1], rddot_[k + 1])
      .slope(s, step());
}

double SphericalTrajectory::rddot(double t) const {
  if (exact_) return exact_->rddot(t);
  double s;
  const auto k = segment(t, s);
  return QuinticSegment(step(), r_[k], rdot_[k], rddot_[k], r_[k + 1], rdot_[k + 1], rddot_[k + 1])
      .curvature(s, step());
}

double SphericalTrajectory::energy_constant() const {
  return rdot_[0] * rdot_[0] * std::pow(r_[0], n_) - n_ * n_ * std::pow(r_[0], n_ - 2);
}

std::vector<double> SphericalTrajectory::energy_constant_samples() const {
  std::vector<double> e(r_.size());
  for (std::size_t k = 0; k < e.size(); ++k)
    e[k] = rdot_[k] * rdot_[k] * std::pow(r_[k], n_) - n_ * n_ * std::pow(r_[k], n_ - 2);
  return e;
}

SphericalTrajectory SphericalTrajectory::reversed() const {
  SphericalTrajectory out = *this;
  std::reverse(out.r_.begin(), out.r_.end());
  std::reverse(out.rdot_.begin(), out.rdot_.end());
  std::reverse(out.rddot_.begin(), out.rddot_.end());
  for (double& v : out.rdot_) v = -v;
  if (exact_) {
    const auto f = *exact_;
    const double T = T_;
    out.exact_ = TrajectoryFunctions{[f, T](double t) { return f.r(T - t); },
                                     [f, T](double t) { return -f.rdot(T - t); },
                                     [f, T](double t) { return f.rddot(T - t); }};
  }
  out.origin_ = origin_ + "-reversed";
  return out;
}

void SphericalTrajectory::write_csv(std::ostream& out) const {
  const double w = unit_sphere_area(n_);
  out << "t,r,rdot,energy_density,action_density\n";
  out.precision(17);
  for (std::size_t k = 0; k < t_.size(); ++k) {
    const double kin = rdot_[k] * rdot_[k] * std::pow(r_[k], n_);
    const double pot = n_ * n_ * std::pow(r_[k], n_ - 2);
    out << t_[k] << ',' << r_[k] << ',' << rdot_[k] << ',' << w * (kin - pot) << ',' << w * (kin + pot)
        << '\n';
  }
}

SphericalTrajectory closed_form_n2(const BoundaryData& bd, int intervals) {
  check_boundary(bd);
  if (bd.n != 2) throw UnsupportedError("closed_form_n2: requires n = 2, got n = " + std::to_string(bd.n));
  const double R02 = bd.R0 * bd.R0;
  const double slope = (bd.RT * bd.RT - R02) / bd.T;  // r² is affine in t
  TrajectoryFunctions f{
      [=](double t) { return std::sqrt(R02 + slope * t); },
      [=](double t) { return slope / (2.0 * std::sqrt(R02 + slope * t)); },
      [=](double t) {
        const double r = std::sqrt(R02 + slope * t);
        return -slope * slope / (4.0 * r * r * r);
      }};
  return SphericalTrajectory::from_functions(2, bd.T, std::move(f), intervals, "closed-form");
}

double stationary_acceleration(int n, double r, double rdot) {
  return (n * n * (n - 2)) / (2.0 * r * r * r) - n * rdot * rdot / (2.0 * r);
}

std::vector<double> el_residual_spherical(const SphericalTrajectory& traj) {
  const int n = traj.n();
  const auto t = traj.times();
  const auto r = traj.radius();
  const auto v = traj.velocity();
  std::vector<double> a;
  if (traj.has_exact()) {
    a.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) a[k] = traj.rddot(t[k]);
  } else {
    a = derivative4(v, traj.step());
  }
  std::vector<double> res(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    res[k] = 2.0 * a[k] * std::pow(r[k], n) + n * v[k] * v[k] * std::pow(r[k], n - 1) -
             n * n * (n - 2) * std::pow(r[k], n - 3);
  }
  return res;
}

double monotone_time_of_flight(const BoundaryData& bd, double E, CompositeConfig cfg) {
  check_boundary(bd);
  return monotone_flight_delta(bd, E - lower_energy(bd), cfg);
}

double turning_time_of_flight(const BoundaryData& bd, double r_turn, CompositeConfig cfg) {
  check_boundary(bd);
  if (bd.n == 2) return kInf;
  const double a = std::min(bd.R0, bd.RT), b = std::max(bd.R0, bd.RT);
  if (bd.n == 1 ? r_turn < b : (r_turn > a || r_turn <= 0.0)) return kInf;
  return half_flight(bd.n, bd.R0, r_turn, cfg) + half_flight(bd.n, bd.RT, r_turn, cfg);
}

std::vector<BvpSolution> solve_bvp_all(const BoundaryData& bd, const BvpOptions& opt) {
  check_boundary(bd);
  const int n = bd.n;
  const double T = bd.T;
  const double a = std::min(bd.R0, bd.RT), b = std::max(bd.R0, bd.RT);
  const auto cfg = opt.quadrature;
  std::vector<Candidate> found;

  if (n == 2 && a == b) {
    found.push_back({BvpBranch::static_sphere, -4.0, 0.0, a, T});
  }

  // Monotone family, parameterized by x = log(E − E_lo); the flight time decreases in x.
  std::ostringstream searched;
  searched.precision(8);
  const double E_lo = lower_energy(bd);
  if (a != b) {
    const double c = n == 2 ? 0.0 : critical_endpoint(bd);
    const double t_sup = n == 2 ? kInf : monotone_flight_delta(bd, 0.0, cfg);
    searched << "monotone E in (" << E_lo << ", inf) covers T < " << t_sup << "; ";
    if (n != 2 && std::abs(t_sup - T) <= opt.time_tolerance * T) {
      found.push_back({BvpBranch::monotone, E_lo, 0.0, c, t_sup});
    } else if (t_sup > T) {
      auto g = [&](double x) { return monotone_flight_delta(bd, std::exp(x), cfg) - T; };
      double hi = 0.0, ghi = g(hi);
      while (ghi > 0.0 && hi < 700.0) ghi = g(hi += 2.0);
      double lo = hi - 2.0, glo = g(lo);
      while (glo < 0.0 && lo > -700.0) glo = g(lo -= 2.0);
      if (glo >= 0.0 && ghi <= 0.0) {
        const double x = (glo == 0.0) ? lo : (ghi == 0.0) ? hi : refine_root(g, lo, hi, glo, ghi);
        const double delta = std::exp(x);
        found.push_back({BvpBranch::monotone, E_lo + delta, delta, c, monotone_flight_delta(bd, delta, cfg)});
      }
    }
  }

  // Turning family: one stop at r*, above both radii for n = 1, below both for n >= 3.
  if (n != 2) {
    auto radius_of = [&](double y) {
      return n == 1 ? b * (1.0 + std::exp(y)) : a / (1.0 + std::exp(-y));
    };
    auto g = [&](double y) { return turning_time_of_flight(bd, radius_of(y), cfg) - T; };
    double ylo = -30.0, yhi = 30.0;
    if (n == 1) {
      yhi = 0.0;
      while (g(yhi) < 0.0 && yhi < 60.0) yhi += 2.0;
    }
    const int m = std::max(opt.scan_points, 8);
    std::vector<double> ys(m), gs(m);
    double tmax = 0.0;
    for (int k = 0; k < m; ++k) {
      ys[k] = ylo + (yhi - ylo) * k / (m - 1);
      gs[k] = g(ys[k]);
      tmax = std::max(tmax, gs[k] + T);
    }
    auto energy_of = [&](double y) {
      return -static_cast<double>(n * n) * std::pow(radius_of(y), n - 2);
    };
    searched << "turning E in [" << std::min(energy_of(ylo), energy_of(yhi)) << ", "
             << std::max(energy_of(ylo), energy_of(yhi)) << "] reaches T <= " << tmax;
    for (int k = 0; k + 1 < m; ++k) {
      if (gs[k] == 0.0 || (gs[k] < 0.0) != (gs[k + 1] < 0.0)) {
        const double y = gs[k] == 0.0 ? ys[k] : refine_root(g, ys[k], ys[k + 1], gs[k], gs[k + 1]);
        const double rs = radius_of(y);
        found.push_back({BvpBranch::turning, energy_of(y), 0.0, rs, g(y) + T});
      }
    }
  }

  // The two families meet at E = E_lo; keep one copy of coincident roots.
  std::vector<Candidate> unique;
  for (const auto& c : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Candidate& u) {
      return std::abs(u.E - c.E) <= 1e-10 * (1.0 + std::abs(c.E));
    });
    if (!dup) unique.push_back(c);
  }
  if (unique.empty()) {
    throw InfeasibleError("no stationary spherical connection for " + describe(bd) + "; searched " +
                          searched.str());
  }

  std::vector<BvpSolution> out;
  for (const auto& c : unique) {
    auto traj = integrate_candidate(bd, c, opt);
    const double mismatch = std::abs(traj.radius().back() - bd.RT);
    const double action = spherical_action(traj, cfg);
    out.push_back({std::move(traj), c.branch, c.E,
                   c.branch == BvpBranch::turning ? c.pivot : std::numeric_limits<double>::quiet_NaN(),
                   c.time, mismatch, action});
  }
  std::sort(out.begin(), out.end(), [](const BvpSolution& x, const BvpSolution& y) { return x.action < y.action; });
  return out;
}

SphericalTrajectory solve_bvp(const BoundaryData& bd, const BvpOptions& options) {
  return solve_bvp_all(bd, options).front().trajectory;
}

double spherical_action(const SphericalTrajectory& traj, CompositeConfig cfg) {
  const int n = traj.n();
  auto f = [&](double t) {
    const double r = traj.r(t), v = traj.rdot(t);
    return v * v * std::pow(r, n) + n * n * std::pow(r, n - 2);
  };
  return unit_sphere_area(n) * integrate(f, 0.0, traj.duration(), cfg);
}

double energy(const SphericalTrajectory& traj, double t) {
  const int n = traj.n();
  const double r = traj.r(t), v = traj.rdot(t);
  return unit_sphere_area(n) * (v * v * std::pow(r, n) - n * n * std::pow(r, n - 2));
}

}  // namespace mcfa
