#include "mcfa/stability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>

#include "mcfa/errors.hpp"

namespace mcfa {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double degree_product(int l) { return static_cast<double>(l) * (l + 1); }

void require_n2(const SphericalTrajectory& r0, const char* who) {
  if (r0.n() != 2) throw UnsupportedError(std::string(who) + ": mode analysis is for n = 2");
}

double trajectory_mcf_time(const SphericalTrajectory& r0) {
  return mcf_time(r0.n(), r0.r(0.0), r0.r(r0.duration()));
}

// Symmetric tridiagonal pencil K − σM on the interior nodes: diagonal and
// off-diagonal of K and M.
struct Pencil {
  std::vector<double> kd, ko, md, mo;
  std::size_t size() const { return kd.size(); }
};

Pencil assemble(int l, const SphericalTrajectory& r0, int elements) {
  const double T = r0.duration();
  const double h = T / elements;
  const double c = mode_coefficient(l, T, trajectory_mcf_time(r0));
  const auto gauss = gauss_legendre(4);
  const std::size_t m = static_cast<std::size_t>(elements) - 1;
  Pencil p;
  p.kd.assign(m, 0.0);
  p.ko.assign(m > 0 ? m - 1 : 0, 0.0);
  p.md.assign(m, 2.0 * h / 3.0);
  p.mo.assign(m > 0 ? m - 1 : 0, h / 6.0);
  for (int e = 0; e < elements; ++e) {
    // Local 2×2 element matrix on [t_e, t_e + h]; basis (1 − s), s.
    double k00 = 0.0, k01 = 0.0, k11 = 0.0;
    for (std::size_t q = 0; q < gauss.size(); ++q) {
      const double s = 0.5 * (gauss.nodes[q] + 1.0);
      const double w = 0.5 * gauss.weights[q] * h;
      const double r = r0.r(h * (e + s));
      const double stiff = 2.0 * kFourPi * r * r / (h * h);
      const double pot = kFourPi * c / (r * r);
      k00 += w * (stiff + pot * (1 - s) * (1 - s));
      k01 += w * (-stiff + pot * (1 - s) * s);
      k11 += w * (stiff + pot * s * s);
    }
    // Element e joins global nodes e and e + 1; interior node j is global j + 1.
    if (e >= 1) p.kd[e - 1] += k00;
    if (e + 1 <= static_cast<int>(m)) p.kd[e] += k11;
    if (e >= 1 && e + 1 <= static_cast<int>(m)) p.ko[e - 1] += k01;
  }
  return p;
}

// Number of generalized eigenvalues below σ (Sylvester inertia of K − σM).
std::size_t count_below(const Pencil& p, double sigma) {
  std::size_t neg = 0;
  double d = 1.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double a = p.kd[j] - sigma * p.md[j];
    double b2 = 0.0;
    if (j > 0) {
      const double b = p.ko[j - 1] - sigma * p.mo[j - 1];
      b2 = b * b;
    }
    d = j == 0 ? a : a - b2 / d;
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(a) + 1e-300);
    if (d < 0.0) ++neg;
  }
  return neg;
}

double smallest_eigenvalue(const Pencil& p) {
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j) hi = std::min(hi, p.kd[j] / p.md[j]);
  double span = std::max(1.0, std::abs(hi));
  hi += 1e-12 * span;
  while (count_below(p, hi) == 0) {
    hi += span;
    span *= 2.0;
  }
  double lo = hi - span;
  while (count_below(p, lo) > 0) {
    span *= 2.0;
    lo = hi - span;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (count_below(p, mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (K − σM) x = y for a symmetric tridiagonal system (no pivoting).
std::vector<double> solve_shifted(const Pencil& p, double sigma, std::vector<double> y) {
  const std::size_t m = p.size();
  std::vector<double> diag(m), off(m > 0 ? m - 1 : 0);
  for (std::size_t j = 0; j < m; ++j) diag[j] = p.kd[j] - sigma * p.md[j];
  for (std::size_t j = 0; j + 1 < m; ++j) off[j] = p.ko[j] - sigma * p.mo[j];
  for (std::size_t j = 1; j < m; ++j) {
    const double f = off[j - 1] / diag[j - 1];
    diag[j] -= f * off[j - 1];
    y[j] -= f * y[j - 1];
  }
  for (std::size_t j = m; j-- > 0;) {
    if (j + 1 < m) y[j] -= off[j] * y[j + 1];
    y[j] /= diag[j];
  }
  return y;
}

double mass_norm2(const Pencil& p, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    s += p.md[j] * x[j] * x[j];
    if (j + 1 < x.size()) s += 2.0 * p.mo[j] * x[j] * x[j + 1];
  }
  return s;
}

std::vector<double> mass_times(const Pencil& p, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    y[j] = p.md[j] * x[j];
    if (j > 0) y[j] += p.mo[j - 1] * x[j - 1];
    if (j + 1 < x.size()) y[j] += p.mo[j] * x[j + 1];
  }
  return y;
}

std::vector<double> eigenvector(const Pencil& p, double lambda) {
  const double shift = lambda - 1e-9 * std::max(1.0, std::abs(lambda));
  std::vector<double> x(p.size(), 1.0);
  for (int it = 0; it < 4; ++it) {
    x = solve_shifted(p, shift, mass_times(p, x));
    const double nrm = std::sqrt(mass_norm2(p, x));
    for (double& v : x) v /= nrm;
  }
  const auto peak = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (peak != x.end() && *peak < 0.0)
    for (double& v : x) v = -v;
  return x;
}

}  // namespace

double mode_coefficient(int l, double T, double T_mcf) {
  if (l < 0) throw DomainError("mode_coefficient: degree must be >= 0");
  if (!(T > 0.0)) throw DomainError("mode_coefficient: T must be positive");
  const double L = degree_product(l);
  const double kappa = T_mcf / T;
  return 4.0 * (2.0 - L) * kappa * kappa + 2.0 * ((L - 1.0) * (L - 1.0) - 1.0);
}

TimeProfile sine_profile(std::vector<double> a, double T) {
  const double w = std::numbers::pi / T;
  TimeProfile p;
  p.eta = [a, w](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::sin((j + 1) * w * t);
    return s;
  };
  p.eta_dot = [a, w](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * (j + 1) * w * std::cos((j + 1) * w * t);
    return s;
  };
  return p;
}

ModeForm second_variation_mode(const SphericalTrajectory& r0, const ModePerturbation& pert, CompositeConfig cfg) {
  require_n2(r0, "second_variation_mode");
  const double T = r0.duration();
  if (std::abs(pert.profile.eta(0.0)) > 1e-12 || std::abs(pert.profile.eta(T)) > 1e-12)
    throw PreconditionError("second_variation_mode: η must vanish at t = 0 and t = T");
  const double c = mode_coefficient(pert.l, T, trajectory_mcf_time(r0));
  ModeForm out;
  out.kinetic = kFourPi * integrate(
                              [&](double t) {
                                const double r = r0.r(t), d = pert.profile.eta_dot(t);
                                return 2.0 * d * d * r * r;
                              },
                              0.0, T, cfg);
  if (c != 0.0) {
    out.potential = kFourPi * c * integrate(
                                      [&](double t) {
                                        const double r = r0.r(t), e = pert.profile.eta(t);
                                        return e * e / (r * r);
                                      },
                                      0.0, T, cfg);
  }
  return out;
}

GeneralSecondVariation second_variation_general(const SphericalTrajectory& r0, GridPtr grid, const TimeGrid& time,
                                                const SpaceTimeFunction& rho, const SpaceTimeFunction& rho_t,
                                                double endpoint_tolerance) {
  if (grid->dim() != r0.n()) throw ShapeError("second_variation_general: grid dimension differs from trajectory");
  const int n = r0.n();
  const double nd = n;
  const std::size_t N = grid->size();
  const auto w = grid->weights();
  GeneralSecondVariation out;
  out.terms.assign(7, 0.0);
  for (double t : {0.0, r0.duration()})
    for (std::size_t i = 0; i < N; ++i)
      if (std::abs(rho(i, t)) > endpoint_tolerance)
        throw PreconditionError("second_variation_general: ρ must vanish at t = 0 and t = T");
  std::vector<double> p(N), pt(N);
  for (std::size_t k = 0; k < time.size(); ++k) {
    const double t = time.t[k];
    for (std::size_t i = 0; i < N; ++i) {
      p[i] = rho(i, t);
      pt[i] = rho_t(i, t);
    }
    const auto D = grid->differentiate(p);
    const double r = r0.r(t), rd = r0.rdot(t);
    const double rn = std::pow(r, nd), rn2 = std::pow(r, nd - 2), rn4 = std::pow(r, nd - 4);
    const double drn = nd * std::pow(r, nd - 1) * rd;
    std::vector<double> slice(7, 0.0);
    double div = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double g2 = D.gradient[i][0] * D.gradient[i][0] + D.gradient[i][1] * D.gradient[i][1];
      const double lap = D.laplacian[i];
      const double rho2 = p[i] * p[i];
      slice[0] += w[i] * 2.0 * pt[i] * pt[i] * rn;
      slice[1] += w[i] * ((nd + 1) * (nd - 2) + 2) * rd * rd * rn2 * rho2;
      slice[2] += w[i] * 2.0 * drn * 2.0 * p[i] * pt[i];
      slice[3] += w[i] * -rd * rd * rn2 * g2;
      slice[4] += w[i] * nd * nd * (nd - 2) * (nd - 3) * rn4 * rho2;
      slice[5] += w[i] * (3 * nd * nd - 8 * nd) * rn4 * g2;
      slice[6] += w[i] * 2.0 * rn4 * lap * lap;
      div += w[i] * (12 * nd - 4 * nd * nd) * rn4 * (g2 + p[i] * lap);
    }
    for (int j = 0; j < 7; ++j) out.terms[j] += time.w[k] * slice[j];
    out.divergence_term += time.w[k] * div;
  }
  for (double v : out.terms) out.value += v;
  return out;
}

QuadraticFormReport min_rayleigh(int l, const SphericalTrajectory& r0, const RayleighOptions& options) {
  require_n2(r0, "min_rayleigh");
  if (options.initial_elements < 2 || options.max_elements < options.initial_elements)
    throw ShapeError("min_rayleigh: bad element counts");
  QuadraticFormReport rep;
  rep.l = l;
  rep.coefficient = mode_coefficient(l, r0.duration(), trajectory_mcf_time(r0));
  double prev = std::numeric_limits<double>::quiet_NaN();
  Pencil pencil;
  for (int m = options.initial_elements; m <= options.max_elements; m *= 2) {
    pencil = assemble(l, r0, m);
    const double lambda = smallest_eigenvalue(pencil);
    rep.elements = m;
    rep.lambda_min = lambda;
    if (!std::isnan(prev)) {
      rep.last_change = std::abs(lambda - prev) / std::max(1.0, std::abs(lambda));
      if (rep.last_change <= options.tolerance) {
        rep.converged = true;
        break;
      }
    }
    prev = lambda;
  }
  rep.coarse_grid = !(rep.last_change <= options.warn_tolerance);

  const auto x = eigenvector(pencil, rep.lambda_min);
  const double h = r0.duration() / rep.elements;
  rep.times.resize(rep.elements + 1);
  rep.eta.assign(rep.elements + 1, 0.0);
  for (int j = 0; j <= rep.elements; ++j) rep.times[j] = h * j;
  rep.times.back() = r0.duration();
  for (std::size_t j = 0; j < x.size(); ++j) rep.eta[j + 1] = x[j];
  return rep;
}

std::vector<QuadraticFormReport> mode_spectrum(const SphericalTrajectory& r0, int l_max, const RayleighOptions& options) {
  require_n2(r0, "mode_spectrum");
  if (l_max < 0) throw DomainError("mode_spectrum: l_max must be >= 0");
  std::vector<QuadraticFormReport> out(static_cast<std::size_t>(l_max) + 1);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int l = 0; l <= l_max; ++l) {
    try {
      out[l] = min_rayleigh(l, r0, options);
    } catch (...) {
#pragma omp critical(mcfa_spectrum_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<QuadraticFormReport>& spectrum, double T, double T_mcf) {
  const auto old = out.precision(17);
  out << "l,c_l,lambda_min,T,T_MCF,kappa\n";
  for (const auto& s : spectrum)
    out << s.l << ',' << s.coefficient << ',' << s.lambda_min << ',' << T << ',' << T_mcf << ',' << T_mcf / T << '\n';
  out.precision(old);
}

ThresholdReport locate_threshold(double R0, double RT, int l_max, double relative_width, const RayleighOptions& options) {
  BoundaryData{2, R0, RT, 1.0}.validate();
  ThresholdReport rep;
  const double T_mcf = mcf_time(2, R0, RT);
  rep.T_local = std::sqrt(3.0) / 3.0 * T_mcf;
  if (T_mcf == 0.0) return rep;

  // Returns the most negative degree, or −1 if every mode is non-negative.
  auto negative_mode = [&](double T) {
    const auto spec = mode_spectrum(closed_form_n2({2, R0, RT, T}, 64), l_max, options);
    int worst = -1;
    double lo = 0.0;
    for (const auto& s : spec) {
      if (s.lambda_min < lo) {
        lo = s.lambda_min;
        worst = s.l;
      }
    }
    return worst;
  };

  double hi = rep.T_local;
  if (negative_mode(hi) >= 0) return rep;  // indefinite at T_local: no sign change below it
  double lo = 0.5 * hi;
  int binding = negative_mode(lo);
  for (int halvings = 0; binding < 0 && halvings < 60; ++halvings) {
    hi = lo;
    lo *= 0.5;
    binding = negative_mode(lo);
  }
  if (binding < 0) return rep;
  while (hi / lo - 1.0 > relative_width) {
    const double mid = std::sqrt(lo * hi);
    const int b = negative_mode(mid);
    if (b >= 0) {
      lo = mid;
      binding = b;
    } else {
      hi = mid;
    }
  }
  rep.found = true;
  rep.T_indefinite = lo;
  rep.T_definite = hi;
  rep.binding_l = binding;
  return rep;
}

}  // namespace mcfa
