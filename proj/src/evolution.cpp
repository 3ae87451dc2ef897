#include "mcfa/evolution.hpp"

#include <exception>
#include <string>

#include "mcfa/errors.hpp"
#include "mcfa/finite_difference.hpp"

namespace mcfa {

TimeGrid TimeGrid::uniform_grid(double T, int intervals) {
  if (!(T > 0.0)) throw DomainError("time grid: T must be positive");
  if (intervals < 4 || intervals % 2 != 0)
    throw ShapeError("time grid: need an even number of intervals >= 4");
  TimeGrid g;
  g.uniform = true;
  g.t.resize(intervals + 1);
  g.w.resize(intervals + 1);
  const double h = T / intervals;
  for (int k = 0; k <= intervals; ++k) {
    g.t[k] = h * k;
    g.w[k] = (k == 0 || k == intervals) ? h / 3.0 : (k % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  }
  g.t.back() = T;
  return g;
}

TimeGrid TimeGrid::gauss(double T, int panels, int points) {
  if (!(T > 0.0)) throw DomainError("time grid: T must be positive");
  const auto rule = composite_gauss_legendre(0.0, T, panels, points);
  TimeGrid g;
  g.t = rule.nodes;
  g.w = rule.weights;
  return g;
}

Evolution::Evolution(GridPtr grid, TimeGrid time, SpaceTimeField r, SpaceTimeField r_t,
                     const EvolutionOptions& options)
    : grid_(std::move(grid)), time_(std::move(time)), r_t_(std::move(r_t)) {
  if (!grid_) throw ShapeError("evolution: null grid");
  const std::size_t K = time_.size();
  if (K < 2) throw ShapeError("evolution: need at least two time nodes");
  for (std::size_t k = 1; k < K; ++k)
    if (!(time_.t[k] > time_.t[k - 1])) throw DomainError("evolution: time grid must be strictly increasing");
  if (r.size() != K || r_t_.size() != K) throw ShapeError("evolution: field count does not match the time grid");

  fields_.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (r_t_[k].size() != grid_->size()) throw ShapeError("evolution: velocity size mismatch at step " + std::to_string(k));
    fields_.emplace_back(grid_, std::move(r[k]));
  }

  geometry_.resize(K);
  v_.resize(K);
  std::exception_ptr failure;
  const long KK = static_cast<long>(K);
#pragma omp parallel for schedule(dynamic) if (options.execution == Execution::parallel)
  for (long k = 0; k < KK; ++k) {
    try {
      geometry_[k] = build_geometry(fields_[k], options.geometry);
      auto& v = v_[k];
      v.resize(grid_->size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = r_t_[k][i] * geometry_[k].x_dot_normal[i];
    } catch (...) {
#pragma omp critical(mcfa_evolution_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Evolution Evolution::sample(GridPtr grid, TimeGrid time, const SpaceTimeFunction& r,
                            const SpaceTimeFunction& r_t, const EvolutionOptions& options) {
  const std::size_t K = time.size(), N = grid->size();
  SpaceTimeField rv(K, std::vector<double>(N)), rt(K, std::vector<double>(N));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      rv[k][i] = r(i, time.t[k]);
      rt[k][i] = r_t(i, time.t[k]);
    }
  }
  return Evolution(std::move(grid), std::move(time), std::move(rv), std::move(rt), options);
}

Evolution Evolution::from_radii(GridPtr grid, TimeGrid time, SpaceTimeField r,
                                const EvolutionOptions& options) {
  if (!time.uniform) throw PreconditionError("evolution: differencing in time needs a uniform grid");
  const std::size_t K = time.size(), N = grid->size();
  if (r.size() != K) throw ShapeError("evolution: field count does not match the time grid");
  SpaceTimeField rt(K, std::vector<double>(N));
  std::vector<double> column(K);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      if (r[k].size() != N) throw ShapeError("evolution: radius size mismatch at step " + std::to_string(k));
      column[k] = r[k][i];
    }
    const auto d = derivative4(column, time.step());
    for (std::size_t k = 0; k < K; ++k) rt[k][i] = d[k];
  }
  return Evolution(std::move(grid), std::move(time), std::move(r), std::move(rt), options);
}

Evolution Evolution::lift(const SphericalTrajectory& traj, GridPtr grid, TimeGrid time,
                          const EvolutionOptions& options) {
  if (grid->dim() != traj.n()) throw ShapeError("evolution: grid dimension differs from trajectory dimension");
  if (std::abs(time.duration() - traj.duration()) > 1e-12 * traj.duration() && time.uniform)
    throw ShapeError("evolution: time grid does not span the trajectory");
  return sample(
      std::move(grid), std::move(time), [&](std::size_t, double t) { return traj.r(t); },
      [&](std::size_t, double t) { return traj.rdot(t); }, options);
}

SpaceTimeField normal_component(const Evolution& ev, const SpaceTimeField& rho) {
  if (rho.size() != ev.steps()) throw ShapeError("normal_component: time count mismatch");
  SpaceTimeField f(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (rho[k].size() != ev.nodes()) throw ShapeError("normal_component: node count mismatch");
    const auto& xn = ev.geometry(k).x_dot_normal;
    f[k].resize(rho[k].size());
    for (std::size_t i = 0; i < rho[k].size(); ++i) f[k][i] = rho[k][i] * xn[i];
  }
  return f;
}

}  // namespace mcfa
