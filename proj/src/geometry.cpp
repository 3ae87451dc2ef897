#include "mcfa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mcfa/errors.hpp"

namespace mcfa {

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ShapeError("radial field: null grid");
  if (values_.size() != grid_->size()) {
    throw ShapeError("radial field: " + std::to_string(values_.size()) + " values for " +
                     std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0)) {
      throw DomainError("radial field: non-positive radius " + std::to_string(values_[i]) +
                        " at node " + std::to_string(i));
    }
  }
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  constant_ = *lo == *hi;
}

RadialField RadialField::constant(GridPtr grid, double radius) {
  const std::size_t n = grid ? grid->size() : 0;
  return RadialField(std::move(grid), std::vector<double>(n, radius));
}

RadialField RadialField::from_function(GridPtr grid,
                                       const std::function<double(const Eigen::VectorXd&)>& f) {
  auto values = grid->sample(f);
  return RadialField(std::move(grid), std::move(values));
}

void RadialField::write_csv(std::ostream& out) const {
  out << "node,theta,phi,r\n";
  out.precision(17);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out << i << ',' << grid_->theta(i) << ',' << grid_->phi(i) << ',' << values_[i] << '\n';
  }
}

double graph_mean_curvature(int n, const RadialJet& j) {
  const double r = j.r;
  const double a0 = j.grad[0], a1 = j.grad[1];
  const double grad2 = a0 * a0 + a1 * a1;
  const double q = r * r + grad2;
  const double hess_aa = j.hess[0] * a0 * a0 + 2.0 * j.hess[1] * a0 * a1 + j.hess[2] * a1 * a1;
  const double num = (n + 1) * r * r * grad2 + n * r * r * r * r + r * hess_aa - r * j.lap * q;
  return num / (r * r * q * std::sqrt(q));
}

PointGeometry point_geometry(int n, int frame_dim, const RadialJet& j) {
  PointGeometry p;
  const double r = j.r;
  if (frame_dim == 0) {
    p.H = n / r;
    p.A2 = n / (r * r);
    p.area = std::pow(r, n);
    p.x_dot_nu = -1.0;
    return p;
  }
  const double a0 = j.grad[0];
  const double a1 = frame_dim > 1 ? j.grad[1] : 0.0;
  const double q = r * r + a0 * a0 + a1 * a1;
  const double w = std::sqrt(q);
  const double r2 = r * r;
  // g^{-1} = (I - a a^T / q) / r²
  const double gi00 = (1.0 - a0 * a0 / q) / r2;
  const double gi01 = (-a0 * a1 / q) / r2;
  const double gi11 = (1.0 - a1 * a1 / q) / r2;
  // h = (r² I + 2 a a^T - r ∇̂²r) / w
  const double h00 = (r2 + 2.0 * a0 * a0 - r * j.hess[0]) / w;
  const double h01 = (2.0 * a0 * a1 - r * j.hess[1]) / w;
  const double h11 = (r2 + 2.0 * a1 * a1 - r * j.hess[2]) / w;
  if (frame_dim == 1) {
    const double s = gi00 * h00;
    p.A2 = s * s;
    p.ginv = {gi00, 0.0, 0.0};
  } else {
    // S = g^{-1} h (mixed tensor); |A|² = tr(S²)
    const double s00 = gi00 * h00 + gi01 * h01;
    const double s01 = gi00 * h01 + gi01 * h11;
    const double s10 = gi01 * h00 + gi11 * h01;
    const double s11 = gi01 * h01 + gi11 * h11;
    p.A2 = s00 * s00 + 2.0 * s01 * s10 + s11 * s11;
    p.ginv = {gi00, gi01, gi11};
  }
  p.H = graph_mean_curvature(n, j);
  p.area = std::pow(r, n - 1) * w;
  p.x_dot_nu = -r / w;
  return p;
}

std::vector<RadialJet> radial_jets(const SphereGrid& grid, std::span<const double> r, bool constant) {
  std::vector<RadialJet> jets(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) jets[i].r = r[i];
  if (constant || grid.kind() == GridKind::symmetric) return jets;
  const FrameDerivatives d = grid.differentiate(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    jets[i].grad = d.gradient[i];
    jets[i].hess = d.hessian[i];
    jets[i].lap = d.laplacian[i];
  }
  return jets;
}

std::vector<RadialJet> radial_jets(const RadialField& r) {
  return radial_jets(*r.grid(), r.values(), r.is_constant());
}

SurfaceGeometry build_geometry(const RadialField& r, const GeometryOptions& options) {
  const SphereGrid& grid = *r.grid();
  if (options.check_resolution && !r.is_constant() && grid.kind() != GridKind::symmetric) {
    const double res = grid.truncation_residual(r.values());
    if (res > options.resolution_tolerance) {
      throw ResolutionError("build_geometry: field is not resolved at band limit " +
                            std::to_string(grid.band_limit()) + " (truncation residual " +
                            std::to_string(res) + ")");
    }
  }
  SurfaceGeometry g;
  g.grid = r.grid();
  g.n = grid.dim();
  g.closed_form = r.is_constant() || grid.kind() == GridKind::symmetric;
  g.radius.assign(r.values().begin(), r.values().end());
  g.jets = radial_jets(r);

  const std::size_t N = r.size();
  const int n = g.n;
  const int fd = grid.frame_dim();
  g.metric.resize(N);
  g.inverse_metric.resize(N);
  g.second_form.resize(N);
  g.tangents.resize(N);
  g.normal.resize(N);
  g.mean_curvature.resize(N);
  g.second_form_norm2.resize(N);
  g.area_element.resize(N);
  g.x_dot_normal.resize(N);

  for (std::size_t i = 0; i < N; ++i) {
    const RadialJet& j = g.jets[i];
    const double rr = j.r;
    const Eigen::VectorXd x = grid.point(i);
    if (g.closed_form) {
      const int m = fd == 0 ? n : fd;
      g.metric[i] = rr * rr * Eigen::MatrixXd::Identity(m, m);
      g.inverse_metric[i] = Eigen::MatrixXd::Identity(m, m) / (rr * rr);
      g.second_form[i] = rr * Eigen::MatrixXd::Identity(m, m);
      g.tangents[i] = rr * grid.frame(i);
      g.normal[i] = -x;
      g.mean_curvature[i] = n / rr;
      g.second_form_norm2[i] = n / (rr * rr);
      g.area_element[i] = std::pow(rr, n);
      g.x_dot_normal[i] = -1.0;
      continue;
    }
    Eigen::VectorXd a(fd);
    Eigen::MatrixXd hess(fd, fd);
    for (int k = 0; k < fd; ++k) a(k) = j.grad[k];
    if (fd == 1) {
      hess(0, 0) = j.hess[0];
    } else {
      hess << j.hess[0], j.hess[1], j.hess[1], j.hess[2];
    }
    const double q = rr * rr + a.squaredNorm();
    const double w = std::sqrt(q);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(fd, fd);
    g.metric[i] = rr * rr * I + a * a.transpose();
    g.inverse_metric[i] = (I - a * a.transpose() / q) / (rr * rr);
    g.second_form[i] = (rr * rr * I + 2.0 * a * a.transpose() - rr * hess) / w;
    const Eigen::MatrixXd e = grid.frame(i);
    g.tangents[i] = x * a.transpose() + rr * e;
    g.normal[i] = -(rr * x - e * a) / w;

    const PointGeometry p = point_geometry(n, fd, j);
    g.mean_curvature[i] = p.H;
    g.second_form_norm2[i] = p.A2;
    g.area_element[i] = p.area;
    g.x_dot_normal[i] = p.x_dot_nu;
  }
  return g;
}

double surface_integral(const SurfaceGeometry& geom, std::span<const double> f) {
  if (f.size() != geom.size()) {
    throw ShapeError("surface_integral: integrand has " + std::to_string(f.size()) +
                     " values, geometry has " + std::to_string(geom.size()));
  }
  const auto w = geom.grid->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * geom.area_element[i] * w[i];
  return s;
}

std::vector<double> laplace_beltrami(const SphereGrid& grid, std::span<const double> f) {
  return grid.laplace_beltrami(f);
}

std::vector<double> surface_laplacian(const SphereGrid& grid, std::span<const RadialJet> jets,
                                      std::span<const PointGeometry> pg, std::span<const double> u) {
  const std::size_t N = u.size();
  if (jets.size() != N || pg.size() != N) throw ShapeError("surface_laplacian: size mismatch");
  std::vector<double> out(N, 0.0);
  if (grid.kind() == GridKind::symmetric) return out;
  const FrameDerivatives du = grid.differentiate(u);
  const bool two = grid.frame_dim() == 2;
  for (std::size_t i = 0; i < N; ++i) {
    const RadialJet& j = jets[i];
    const auto& gi = pg[i].ginv;
    const double a0 = j.grad[0], a1 = two ? j.grad[1] : 0.0;
    const double g00 = gi[0], g01 = two ? gi[1] : 0.0, g11 = two ? gi[2] : 0.0;
    const double trace_gi = g00 + g11;
    const double gi_hr = g00 * j.hess[0] + (two ? 2.0 * g01 * j.hess[1] + g11 * j.hess[2] : 0.0);
    const double gia0 = g00 * a0 + g01 * a1;
    const double gia1 = g01 * a0 + g11 * a1;
    // contracted difference tensor g^{ij} C^k_ij = g^{kl} w_l
    const double w0 = j.r * (2.0 * gia0 - a0 * trace_gi) + gi_hr * a0;
    const double w1 = j.r * (2.0 * gia1 - a1 * trace_gi) + gi_hr * a1;
    const double c0 = g00 * w0 + g01 * w1;
    const double c1 = g01 * w0 + g11 * w1;
    const auto& hu = du.hessian[i];
    const double gi_hu = g00 * hu[0] + (two ? 2.0 * g01 * hu[1] + g11 * hu[2] : 0.0);
    out[i] = gi_hu - c0 * du.gradient[i][0] - (two ? c1 * du.gradient[i][1] : 0.0);
  }
  return out;
}

std::vector<double> surface_laplacian(const SurfaceGeometry& geom, std::span<const double> u) {
  std::vector<PointGeometry> pg(geom.size());
  for (std::size_t i = 0; i < geom.size(); ++i) {
    const auto& gi = geom.inverse_metric[i];
    if (gi.rows() == 1) pg[i].ginv = {gi(0, 0), 0.0, 0.0};
    else if (gi.rows() == 2) pg[i].ginv = {gi(0, 0), gi(0, 1), gi(1, 1)};
  }
  return surface_laplacian(*geom.grid, geom.jets, pg, u);
}

std::vector<Eigen::VectorXd> surface_gradient(const SurfaceGeometry& geom, std::span<const double> u) {
  const SphereGrid& grid = *geom.grid;
  std::vector<Eigen::VectorXd> out(geom.size(), Eigen::VectorXd::Zero(geom.n + 1));
  if (grid.kind() == GridKind::symmetric) return out;
  const FrameDerivatives du = grid.differentiate(u);
  const int fd = grid.frame_dim();
  for (std::size_t i = 0; i < geom.size(); ++i) {
    Eigen::VectorXd d(fd);
    for (int k = 0; k < fd; ++k) d(k) = du.gradient[i][k];
    out[i] = geom.tangents[i] * (geom.inverse_metric[i] * d);
  }
  return out;
}

std::vector<Eigen::MatrixXd> frame_derivative(const SphereGrid& grid,
                                              std::span<const Eigen::VectorXd> field) {
  const std::size_t N = grid.size();
  if (field.size() != N) throw ShapeError("frame_derivative: size mismatch");
  const int fd = grid.frame_dim();
  const int dim = N ? static_cast<int>(field[0].size()) : 0;
  std::vector<Eigen::MatrixXd> out(N, Eigen::MatrixXd::Zero(dim, fd));
  if (fd == 0) return out;
  std::vector<double> comp(N);
  for (int c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < N; ++i) comp[i] = field[i](c);
    const FrameDerivatives d = grid.differentiate(comp);
    for (std::size_t i = 0; i < N; ++i)
      for (int k = 0; k < fd; ++k) out[i](c, k) = d.gradient[i][k];
  }
  return out;
}

}  // namespace mcfa
