#include "kernels_detail.hpp"

namespace mcfa::detail {

// Slices are computed concurrently into fixed slots and summed afterwards in
// index order, so results do not depend on the thread count.

double action_parallel(const Evolution& ev) {
  const long K = static_cast<long>(ev.steps());
  std::vector<double> slot(K);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < K; ++k) slot[k] = slice_action(ev, k);
  double s = 0.0;
  for (long k = 0; k < K; ++k) s += ev.time().w[k] * slot[k];
  return s;
}

std::vector<double> energy_parallel(const Evolution& ev) {
  const long K = static_cast<long>(ev.steps());
  std::vector<double> e(K);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < K; ++k) e[k] = slice_energy(ev, k);
  return e;
}

SpaceTimeField el_parallel(const Evolution& ev) {
  const long K = static_cast<long>(ev.steps());
  const long N = static_cast<long>(ev.nodes());
  SpaceTimeField dv(K, std::vector<double>(N));
  SpaceTimeField out(K);
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (long i = 0; i < N; ++i) node_velocity_rate(ev, i, dv);
#pragma omp for schedule(dynamic)
    for (long k = 0; k < K; ++k) out[k] = slice_el(ev, k, dv[k]);
  }
  return out;
}

}  // namespace mcfa::detail
