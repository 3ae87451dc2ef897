// Reference loops: plain, in index order. The OpenMP versions must reproduce these exactly.
#include "kernels_detail.hpp"

namespace mcfa::detail {

double action_serial(const Evolution& ev) {
  double s = 0.0;
  for (std::size_t k = 0; k < ev.steps(); ++k) s += ev.time().w[k] * slice_action(ev, k);
  return s;
}

std::vector<double> energy_serial(const Evolution& ev) {
  std::vector<double> e(ev.steps());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = slice_energy(ev, k);
  return e;
}

SpaceTimeField el_serial(const Evolution& ev) {
  SpaceTimeField dv(ev.steps(), std::vector<double>(ev.nodes()));
  for (std::size_t i = 0; i < ev.nodes(); ++i) node_velocity_rate(ev, i, dv);
  SpaceTimeField out(ev.steps());
  for (std::size_t k = 0; k < ev.steps(); ++k) out[k] = slice_el(ev, k, dv[k]);
  return out;
}

}  // namespace mcfa::detail
