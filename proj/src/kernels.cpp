#include <cmath>

#include "kernels_detail.hpp"
#include "mcfa/errors.hpp"
#include "mcfa/finite_difference.hpp"

namespace mcfa {

namespace detail {

double slice_action(const Evolution& ev, std::size_t k) {
  const auto& g = ev.geometry(k);
  const auto v = ev.normal_velocity(k);
  const auto w = ev.grid()->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double H = g.mean_curvature[i];
    s += (v[i] * v[i] + H * H) * g.area_element[i] * w[i];
  }
  return s;
}

double slice_energy(const Evolution& ev, std::size_t k) {
  const auto& g = ev.geometry(k);
  const auto v = ev.normal_velocity(k);
  const auto w = ev.grid()->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double H = g.mean_curvature[i];
    s += (v[i] * v[i] - H * H) * g.area_element[i] * w[i];
  }
  return s;
}

void node_velocity_rate(const Evolution& ev, std::size_t i, SpaceTimeField& dv) {
  const std::size_t K = ev.steps();
  std::vector<double> column(K);
  for (std::size_t k = 0; k < K; ++k) column[k] = ev.normal_velocity(k)[i];
  const auto d = derivative4(column, ev.time().step());
  for (std::size_t k = 0; k < K; ++k) dv[k][i] = d[k];
}

std::vector<double> slice_el(const Evolution& ev, std::size_t k, std::span<const double> dv) {
  const auto& g = ev.geometry(k);
  const auto v = ev.normal_velocity(k);
  const auto lap = surface_laplacian(g, g.mean_curvature);
  // Grid points move with r_t·x, which has a tangential part; the derivative of v
  // along the normal motion is ∂_t v − r_t ⟨∇v, x⟩.
  const auto rt = ev.radial_velocity(k);
  const auto grad_v = surface_gradient(g, v);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double H = g.mean_curvature[i];
    const double dv_normal = dv[i] - rt[i] * grad_v[i].dot(ev.grid()->point(i));
    out[i] = -dv_normal + lap[i] + H * g.second_form_norm2[i] - 0.5 * H * H * H + 0.5 * v[i] * v[i] * H;
  }
  return out;
}

}  // namespace detail

double action_kernel(const Evolution& ev, Execution exec) {
  return exec == Execution::serial ? detail::action_serial(ev) : detail::action_parallel(ev);
}

std::vector<double> energy_kernel(const Evolution& ev, Execution exec) {
  return exec == Execution::serial ? detail::energy_serial(ev) : detail::energy_parallel(ev);
}

SpaceTimeField el_kernel(const Evolution& ev, Execution exec) {
  if (!ev.time().uniform) throw PreconditionError("el_kernel: time derivative of v needs a uniform time grid");
  return exec == Execution::serial ? detail::el_serial(ev) : detail::el_parallel(ev);
}

}  // namespace mcfa
