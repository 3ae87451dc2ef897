#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mcfa {

enum class GridKind {
  circle,     ///< S^1, uniform nodes, Fourier differentiation
  sphere2,    ///< S^2, Gauss–Legendre in cos θ × uniform longitude, real spherical harmonics
  symmetric,  ///< S^n for any n, one node carrying the whole sphere; constant fields only
};

/// Unit-sphere derivatives of a scalar field, in the orthonormal frame of the
/// sphere: (e_θ) on S^1, (e_θ, e_φ) on S^2. Unused components are zero.
struct FrameDerivatives {
  std::vector<std::array<double, 2>> gradient;
  std::vector<std::array<double, 3>> hessian;  ///< (11, 12, 22), covariant
  std::vector<double> laplacian;
};

/// Discretized unit n-sphere with quadrature weights and spectral operators.
///
/// Instances are immutable; share them through `std::shared_ptr<const SphereGrid>`.
/// On S^2 node (i, j) (latitude i, longitude j) has flat index i * nlon + j.
/// Spectral coefficients use real harmonics that are orthonormal in L²(S^n).
class SphereGrid {
 public:
  static std::shared_ptr<const SphereGrid> circle(int band_limit = 16, int nodes = 0);
  static std::shared_ptr<const SphereGrid> sphere2(int band_limit = 16, int nlat = 0,
                                                   int nlon = 0);
  static std::shared_ptr<const SphereGrid> symmetric(int n);

  GridKind kind() const { return kind_; }
  int dim() const { return n_; }
  /// Dimension of the tangent frame actually carried by the grid (0 for symmetric).
  int frame_dim() const { return kind_ == GridKind::symmetric ? 0 : n_; }
  int band_limit() const { return band_limit_; }
  std::size_t size() const { return weights_.size(); }
  int nlat() const { return nlat_; }
  int nlon() const { return nlon_; }

  std::span<const double> weights() const { return weights_; }
  double theta(std::size_t i) const { return theta_[i]; }
  double phi(std::size_t i) const { return phi_[i]; }

  /// Unit vector x in R^{n+1} represented by node i.
  Eigen::VectorXd point(std::size_t i) const;
  /// Columns are the frame vectors e_k at node i, (n+1) × frame_dim().
  Eigen::MatrixXd frame(std::size_t i) const;

  std::vector<double> sample(const std::function<double(const Eigen::VectorXd&)>& f) const;

  /// Real harmonic of degree l; m >= 0 selects the cosine family, m < 0 the sine family.
  std::vector<double> harmonic(int l, int m = 0) const;
  /// Laplace–Beltrami eigenvalue of degree l: -l(l + n - 1).
  double eigenvalue(int l) const { return -static_cast<double>(l) * (l + n_ - 1); }

  std::size_t coefficient_count() const;
  std::vector<double> analyze(std::span<const double> f) const;
  std::vector<double> synthesize(std::span<const double> coefficients) const;
  /// Degree of each coefficient slot.
  std::vector<int> coefficient_degrees() const;

  FrameDerivatives differentiate(std::span<const double> f) const;
  std::vector<double> laplace_beltrami(std::span<const double> f) const;

  /// ∫ f dμ̂ over the unit sphere.
  double integrate(std::span<const double> f) const;
  double total_weight() const;

  /// max |f − P_L f| / max(1, max |f|), where P_L projects onto the band limit.
  double truncation_residual(std::span<const double> f) const;

 private:
  SphereGrid() = default;
  void check_size(std::span<const double> f) const;
  std::size_t lm_index(int l, int m) const { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }

  GridKind kind_ = GridKind::symmetric;
  int n_ = 0;
  int band_limit_ = 0;
  int nlat_ = 0;
  int nlon_ = 0;
  std::vector<double> weights_;
  std::vector<double> theta_;
  std::vector<double> phi_;

  // S^2 tables: per latitude, normalized associated Legendre values and θ-derivatives.
  std::vector<double> legendre_;     // nlat × (L+1)(L+2)/2
  std::vector<double> dlegendre_;
  std::vector<double> d2legendre_;
  std::vector<double> cos_table_;    // (L+1) × nlon (or × nodes on the circle)
  std::vector<double> sin_table_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

}  // namespace mcfa
