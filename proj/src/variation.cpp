#include "mcfa/variation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kernels_detail.hpp"
#include "mcfa/errors.hpp"
#include "mcfa/finite_difference.hpp"

namespace mcfa {

double action(const Evolution& ev) { return action_kernel(ev, Execution::parallel); }

SpaceTimeField el_residual(const Evolution& ev) { return el_kernel(ev, Execution::parallel); }

double first_variation_pairing(const Evolution& ev, const SpaceTimeField& f, double endpoint_tolerance) {
  const std::size_t K = ev.steps();
  if (f.size() != K) throw ShapeError("first_variation_pairing: time count mismatch");
  for (std::size_t k : {std::size_t{0}, K - 1}) {
    if (f[k].size() != ev.nodes()) throw ShapeError("first_variation_pairing: node count mismatch");
    for (double x : f[k]) {
      if (std::abs(x) > endpoint_tolerance) {
        throw PreconditionError("first_variation_pairing: perturbation must vanish at t = 0 and t = T (|f| = " +
                                std::to_string(std::abs(x)) + ")");
      }
    }
  }
  const auto el = el_residual(ev);
  const auto w = ev.grid()->weights();
  double s = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (f[k].size() != ev.nodes()) throw ShapeError("first_variation_pairing: node count mismatch");
    const auto& mu = ev.geometry(k).area_element;
    double slice = 0.0;
    for (std::size_t i = 0; i < ev.nodes(); ++i) slice += f[k][i] * el[k][i] * mu[i] * w[i];
    s += ev.time().w[k] * slice;
  }
  return 2.0 * s;
}

double VariationCheck::max_error() const {
  return std::max({measure, normal, mean_curvature, velocity});
}

VariationCheck variation_formula_checks(const RadialField& r, std::span<const double> f, double eps,
                                        const GeometryOptions& options) {
  const GridPtr& grid = r.grid();
  const std::size_t N = r.size();
  if (f.size() != N) throw ShapeError("variation_formula_checks: f does not match the grid");
  const auto g0 = build_geometry(r, options);
  const int fd = grid->frame_dim();

  std::vector<double> dr(N);
  for (std::size_t i = 0; i < N; ++i) dr[i] = f[i] / g0.x_dot_normal[i];
  auto shifted = [&](double s) {
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = r[i] + s * dr[i];
    return RadialField(grid, std::move(v));
  };
  GeometryOptions loose = options;
  loose.check_resolution = false;  // f/⟨x,ν⟩ need not be band-limited
  const auto gp = build_geometry(shifted(eps), loose);
  const auto gm = build_geometry(shifted(-eps), loose);

  // Tangential part τ of the displacement dr·x, its frame components w = g⁻¹Tᵀτ,
  // and the derivatives needed for the τ-terms.
  std::vector<Eigen::VectorXd> tau(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Eigen::VectorXd x = grid->point(i);
    tau[i] = dr[i] * (x - g0.x_dot_normal[i] * g0.normal[i]);
  }
  std::vector<double> lap_f(N, 0.0), tau_H(N, 0.0), div_tau(N, 0.0);
  std::vector<Eigen::VectorXd> grad_f(N, Eigen::VectorXd::Zero(grid->dim() + 1)), d_tau_nu = grad_f;
  if (fd > 0) {
    lap_f = surface_laplacian(g0, f);
    grad_f = surface_gradient(g0, f);
    const auto dH = grid->differentiate(g0.mean_curvature);
    const auto dnu = frame_derivative(*grid, g0.normal);
    const auto dtau = frame_derivative(*grid, tau);
    for (std::size_t i = 0; i < N; ++i) {
      const Eigen::MatrixXd& T = g0.tangents[i];
      const Eigen::VectorXd w = g0.inverse_metric[i] * (T.transpose() * tau[i]);
      for (int k = 0; k < fd; ++k) tau_H[i] += w(k) * dH.gradient[i][k];
      d_tau_nu[i] = dnu[i] * w;
      div_tau[i] = (g0.inverse_metric[i] * (T.transpose() * dtau[i])).trace();
    }
  }

  double e_mu = 0, s_mu = 1, e_nu = 0, s_nu = 1, e_H = 0, s_H = 1, e_v = 0, s_v = 1;
  for (std::size_t i = 0; i < N; ++i) {
    const double H = g0.mean_curvature[i];
    const double mu = g0.area_element[i];

    const double d_mu = (gp.area_element[i] - gm.area_element[i]) / (2 * eps);
    const double want_mu = (-H * f[i] + div_tau[i]) * mu;
    e_mu = std::max(e_mu, std::abs(d_mu - want_mu));
    s_mu = std::max(s_mu, std::abs(want_mu));

    const Eigen::VectorXd d_nu = (gp.normal[i] - gm.normal[i]) / (2 * eps);
    const Eigen::VectorXd want_nu = -grad_f[i] + d_tau_nu[i];
    e_nu = std::max(e_nu, (d_nu - want_nu).norm());
    s_nu = std::max(s_nu, want_nu.norm());

    const double d_H = (gp.mean_curvature[i] - gm.mean_curvature[i]) / (2 * eps);
    const double want_H = lap_f[i] + f[i] * g0.second_form_norm2[i] + tau_H[i];
    e_H = std::max(e_H, std::abs(d_H - want_H));
    s_H = std::max(s_H, std::abs(want_H));

    // Static base r, perturbed family r + ε t dr: at t = 1, v_ε = ε dr ⟨x, ν_ε⟩.
    const double d_v = (eps * dr[i] * gp.x_dot_normal[i] + eps * dr[i] * gm.x_dot_normal[i]) / (2 * eps);
    e_v = std::max(e_v, std::abs(d_v - f[i]));
    s_v = std::max(s_v, std::abs(f[i]));
  }
  VariationCheck out;
  out.epsilon = eps;
  out.measure = e_mu / s_mu;
  out.normal = e_nu / s_nu;
  out.mean_curvature = e_H / s_H;
  out.velocity = e_v / s_v;
  return out;
}

double energy_general(const Evolution& ev, std::size_t k) {
  if (k >= ev.steps()) throw ShapeError("energy_general: time index out of range");
  return detail::slice_energy(ev, k);
}

std::vector<double> energy_general(const Evolution& ev) { return energy_kernel(ev, Execution::parallel); }

Eigen::MatrixXd angular_momentum(const Evolution& ev, std::size_t k) {
  if (k >= ev.steps()) throw ShapeError("angular_momentum: time index out of range");
  const auto& g = ev.geometry(k);
  const auto v = ev.normal_velocity(k);
  const auto w = ev.grid()->weights();
  const int m = ev.n() + 1;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < ev.nodes(); ++i) {
    const Eigen::VectorXd phi = g.position(i);
    const Eigen::VectorXd& nu = g.normal[i];
    L += (v[i] * g.area_element[i] * w[i]) * (nu * phi.transpose() - phi * nu.transpose());
  }
  return L;
}

ConformalReport conformal_identity_check(const Evolution& ev, const ConformalOptions& options) {
  if (!ev.time().uniform) throw PreconditionError("conformal_identity_check: needs a uniform time grid");
  ConformalReport rep;
  const auto el = el_residual(ev);
  std::size_t worst_k = 0, worst_i = 0;
  for (std::size_t k = 0; k < el.size(); ++k) {
    for (std::size_t i = 0; i < el[k].size(); ++i) {
      if (std::abs(el[k][i]) > rep.el_residual_max) {
        rep.el_residual_max = std::abs(el[k][i]);
        worst_k = k;
        worst_i = i;
      }
    }
  }
  if (rep.el_residual_max > options.stationarity_tolerance) {
    std::ostringstream msg;
    msg << "conformal_identity_check: input is not stationary (max |EL residual| = " << rep.el_residual_max
        << " at t = " << ev.time().t[worst_k] << ", node " << worst_i << "; tolerance "
        << options.stationarity_tolerance << ")";
    throw PreconditionError(msg.str());
  }

  const std::size_t K = ev.steps();
  const int n = ev.n();
  const auto w = ev.grid()->weights();
  std::vector<double> flux(K), slice_S(K);
  const auto E = energy_general(ev);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& g = ev.geometry(k);
    const auto v = ev.normal_velocity(k);
    double s = 0.0, a = 0.0;
    for (std::size_t i = 0; i < ev.nodes(); ++i) {
      const double phi_nu = g.radius[i] * g.x_dot_normal[i];
      s += v[i] * phi_nu * g.area_element[i] * w[i];
      a += (v[i] * v[i] + g.mean_curvature[i] * g.mean_curvature[i]) * g.area_element[i] * w[i];
    }
    flux[k] = s;
    slice_S[k] = a;
  }
  rep.flux_change = flux.back() - flux.front();
  rep.action = action(ev);
  for (std::size_t k = 0; k < K; ++k) rep.time_energy += ev.time().w[k] * E[k];
  rep.quoted_rhs = 2.0 * rep.time_energy + n * rep.action;
  rep.derived_rhs = rep.time_energy + 0.5 * n * rep.action;
  const double scale = std::max(std::abs(rep.action), 1e-300);
  rep.quoted_error = std::abs(rep.flux_change - rep.quoted_rhs) / scale;
  rep.derived_error = std::abs(rep.flux_change - rep.derived_rhs) / scale;

  const auto rate = derivative4(flux, ev.time().step());
  double rate_scale = 0.0, eq = 0.0, ed = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    rate_scale = std::max({rate_scale, std::abs(rate[k]), std::abs(E[k]), slice_S[k]});
    eq = std::max(eq, std::abs(rate[k] - (2.0 * E[k] + 0.5 * n * slice_S[k])));
    ed = std::max(ed, std::abs(rate[k] - (E[k] + 0.5 * n * slice_S[k])));
  }
  rate_scale = std::max(rate_scale, 1e-300);
  rep.quoted_rate_error = eq / rate_scale;
  rep.derived_rate_error = ed / rate_scale;
  rep.quoted_holds = rep.quoted_error <= options.tolerance;
  rep.derived_holds = rep.derived_error <= options.tolerance;
  rep.quoted_rate_holds = rep.quoted_rate_error <= options.tolerance;
  rep.derived_rate_holds = rep.derived_rate_error <= options.tolerance;
  return rep;
}

}  // namespace mcfa
