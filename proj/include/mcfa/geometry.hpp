#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcfa/sphere_grid.hpp"

namespace mcfa {

/// Positive radius function r on a sphere grid; the surface is φ(x) = r(x)·x.
class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<double> values);

  static RadialField constant(GridPtr grid, double radius);
  static RadialField from_function(GridPtr grid,
                                   const std::function<double(const Eigen::VectorXd&)>& f);

  const GridPtr& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  /// True when every node carries the same value; such fields take the closed-form path.
  bool is_constant() const { return constant_; }

  std::vector<double> coefficients() const { return grid_->analyze(values_); }

  /// CSV rows: node, theta, phi, r.
  void write_csv(std::ostream& out) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  bool constant_ = false;
};

/// r and its unit-sphere derivatives at one node (frame components).
struct RadialJet {
  double r = 1.0;
  std::array<double, 2> grad{0.0, 0.0};
  std::array<double, 3> hess{0.0, 0.0, 0.0};  ///< (11, 12, 22)
  double lap = 0.0;
};

/// Scalar geometry of a graph surface at one node.
struct PointGeometry {
  double H = 0.0;         ///< mean curvature, inner normal (n/r on a sphere)
  double A2 = 0.0;        ///< |A|² = h_ij g^jk h_kl g^li
  double area = 0.0;      ///< dμ / dμ̂ = r^{n-1} sqrt(r² + |∇̂r|²)
  double x_dot_nu = -1.0; ///< ⟨x, ν⟩ = -r / sqrt(r² + |∇̂r|²)
  std::array<double, 3> ginv{0.0, 0.0, 0.0};  ///< inverse metric (11, 12, 22); frame dim <= 2
};

/// Mean curvature of a graph over the sphere from r, ∇̂r, ∇̂²r and Δ̂r.
double graph_mean_curvature(int n, const RadialJet& jet);

/// `frame_dim` is the number of jet components in use (0 for the symmetric grid).
PointGeometry point_geometry(int n, int frame_dim, const RadialJet& jet);

/// Jets of r at every node; constant fields skip differentiation.
std::vector<RadialJet> radial_jets(const RadialField& r);
std::vector<RadialJet> radial_jets(const SphereGrid& grid, std::span<const double> r, bool constant);

struct GeometryOptions {
  /// Relative spectral truncation residual of r above which the grid is deemed too coarse.
  double resolution_tolerance = 1e-6;
  bool check_resolution = true;
};

/// Induced geometry of φ = r·x at every node. Tensors are in the orthonormal
/// frame of the unit sphere, so the round metric is the identity there.
struct SurfaceGeometry {
  GridPtr grid;
  int n = 0;
  bool closed_form = false;
  std::vector<double> radius;
  std::vector<RadialJet> jets;
  std::vector<Eigen::MatrixXd> metric;
  std::vector<Eigen::MatrixXd> inverse_metric;
  std::vector<Eigen::MatrixXd> second_form;
  std::vector<Eigen::MatrixXd> tangents;  ///< (n+1) × frame_dim, columns D_{e_k} φ
  std::vector<Eigen::VectorXd> normal;    ///< inner unit normal
  std::vector<double> mean_curvature;
  std::vector<double> second_form_norm2;
  std::vector<double> area_element;
  std::vector<double> x_dot_normal;

  std::size_t size() const { return radius.size(); }
  Eigen::VectorXd position(std::size_t i) const { return radius[i] * grid->point(i); }
};

SurfaceGeometry build_geometry(const RadialField& r, const GeometryOptions& options = {});

/// Σ f · dμ · w over the grid.
double surface_integral(const SurfaceGeometry& geom, std::span<const double> f);

/// Discrete Laplace–Beltrami operator of the unit sphere.
std::vector<double> laplace_beltrami(const SphereGrid& grid, std::span<const double> f);

/// Laplace–Beltrami operator of the induced metric applied to u.
std::vector<double> surface_laplacian(const SphereGrid& grid, std::span<const RadialJet> jets,
                                      std::span<const PointGeometry> pg, std::span<const double> u);
std::vector<double> surface_laplacian(const SurfaceGeometry& geom, std::span<const double> u);

/// Tangential gradient of u as an ambient vector field.
std::vector<Eigen::VectorXd> surface_gradient(const SurfaceGeometry& geom, std::span<const double> u);

/// Frame derivatives D_{e_k} of an ambient vector field, one (n+1) × frame_dim matrix per node.
std::vector<Eigen::MatrixXd> frame_derivative(const SphereGrid& grid,
                                              std::span<const Eigen::VectorXd> field);

}  // namespace mcfa
