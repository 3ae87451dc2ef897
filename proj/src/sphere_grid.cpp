#include "mcfa/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mcfa/errors.hpp"
#include "mcfa/quadrature.hpp"

namespace mcfa {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Orthonormal associated Legendre functions (no Condon–Shortley phase) and their
// first two θ-derivatives at colatitude theta, for 0 <= m <= l <= L.
void legendre_table(int L, double theta, double* p, double* dp, double* d2p) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  auto idx = [](int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; };

  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p[idx(m, m)] = pmm;
    if (m + 1 <= L) p[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * c * pmm;
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p[idx(l, m)] = a * (c * p[idx(l - 1, m)] - b * p[idx(l - 2, m)]);
    }
  }
  for (int m = 0; m <= L; ++m) {
    for (int l = m; l <= L; ++l) {
      double lower = 0.0;
      if (l > m) {
        lower = std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - m * m) / (2.0 * l - 1.0)) *
                p[idx(l - 1, m)];
      }
      const double d = (l * c * p[idx(l, m)] - lower) / s;
      dp[idx(l, m)] = d;
      d2p[idx(l, m)] = -(c / s) * d - (l * (l + 1.0) - m * m / (s * s)) * p[idx(l, m)];
    }
  }
}

}  // namespace

std::shared_ptr<const SphereGrid> SphereGrid::circle(int band_limit, int nodes) {
  if (band_limit < 0) throw ResolutionError("circle grid: negative band limit");
  if (nodes == 0) nodes = 4 * band_limit + 4;
  if (nodes < 2 * band_limit + 1) {
    throw ResolutionError("circle grid: " + std::to_string(nodes) + " nodes cannot resolve band limit " +
                          std::to_string(band_limit));
  }
  auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
  g->kind_ = GridKind::circle;
  g->n_ = 1;
  g->band_limit_ = band_limit;
  g->nlon_ = nodes;
  g->nlat_ = 1;
  g->weights_.assign(nodes, 2.0 * kPi / nodes);
  g->theta_.resize(nodes);
  g->phi_.assign(nodes, 0.0);
  g->cos_table_.resize(static_cast<std::size_t>(band_limit + 1) * nodes);
  g->sin_table_.resize(g->cos_table_.size());
  for (int j = 0; j < nodes; ++j) g->theta_[j] = 2.0 * kPi * j / nodes;
  for (int k = 0; k <= band_limit; ++k) {
    for (int j = 0; j < nodes; ++j) {
      g->cos_table_[static_cast<std::size_t>(k) * nodes + j] = std::cos(k * g->theta_[j]);
      g->sin_table_[static_cast<std::size_t>(k) * nodes + j] = std::sin(k * g->theta_[j]);
    }
  }
  return g;
}

std::shared_ptr<const SphereGrid> SphereGrid::sphere2(int band_limit, int nlat, int nlon) {
  if (band_limit < 0) throw ResolutionError("sphere grid: negative band limit");
  if (nlat == 0) nlat = 2 * (band_limit + 1);
  if (nlon == 0) nlon = 2 * nlat;
  if (nlat < band_limit + 1 || nlon < 2 * band_limit + 1) {
    throw ResolutionError("sphere grid: " + std::to_string(nlat) + "×" + std::to_string(nlon) +
                          " nodes cannot resolve band limit " + std::to_string(band_limit));
  }
  auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
  g->kind_ = GridKind::sphere2;
  g->n_ = 2;
  g->band_limit_ = band_limit;
  g->nlat_ = nlat;
  g->nlon_ = nlon;

  const QuadratureRule gl = gauss_legendre(nlat);
  const std::size_t nodes = static_cast<std::size_t>(nlat) * nlon;
  g->weights_.resize(nodes);
  g->theta_.resize(nodes);
  g->phi_.resize(nodes);
  const std::size_t nlm = static_cast<std::size_t>(band_limit + 1) * (band_limit + 2) / 2;
  g->legendre_.resize(nlat * nlm);
  g->dlegendre_.resize(nlat * nlm);
  g->d2legendre_.resize(nlat * nlm);
  for (int i = 0; i < nlat; ++i) {
    // GL nodes ascend in cos θ; store north to south.
    const double x = gl.nodes[nlat - 1 - i];
    const double theta = std::acos(x);
    legendre_table(band_limit, theta, &g->legendre_[i * nlm], &g->dlegendre_[i * nlm],
                   &g->d2legendre_[i * nlm]);
    for (int j = 0; j < nlon; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * nlon + j;
      g->theta_[k] = theta;
      g->phi_[k] = 2.0 * kPi * j / nlon;
      g->weights_[k] = gl.weights[nlat - 1 - i] * 2.0 * kPi / nlon;
    }
  }
  g->cos_table_.resize(static_cast<std::size_t>(band_limit + 1) * nlon);
  g->sin_table_.resize(g->cos_table_.size());
  for (int m = 0; m <= band_limit; ++m) {
    for (int j = 0; j < nlon; ++j) {
      const double ph = 2.0 * kPi * j / nlon;
      g->cos_table_[static_cast<std::size_t>(m) * nlon + j] = std::cos(m * ph);
      g->sin_table_[static_cast<std::size_t>(m) * nlon + j] = std::sin(m * ph);
    }
  }
  return g;
}

std::shared_ptr<const SphereGrid> SphereGrid::symmetric(int n) {
  if (n < 1) throw DomainError("symmetric grid: dimension must be >= 1");
  auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
  g->kind_ = GridKind::symmetric;
  g->n_ = n;
  g->band_limit_ = 0;
  g->nlat_ = 1;
  g->nlon_ = 1;
  g->weights_ = {unit_sphere_area(n)};
  g->theta_ = {0.0};
  g->phi_ = {0.0};
  return g;
}

Eigen::VectorXd SphereGrid::point(std::size_t i) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_ + 1);
  switch (kind_) {
    case GridKind::circle:
      x << std::cos(theta_[i]), std::sin(theta_[i]);
      break;
    case GridKind::sphere2:
      x << std::sin(theta_[i]) * std::cos(phi_[i]), std::sin(theta_[i]) * std::sin(phi_[i]),
          std::cos(theta_[i]);
      break;
    case GridKind::symmetric:
      x(0) = 1.0;
      break;
  }
  return x;
}

Eigen::MatrixXd SphereGrid::frame(std::size_t i) const {
  Eigen::MatrixXd e(n_ + 1, frame_dim());
  switch (kind_) {
    case GridKind::circle:
      e.col(0) << -std::sin(theta_[i]), std::cos(theta_[i]);
      break;
    case GridKind::sphere2: {
      const double ct = std::cos(theta_[i]), st = std::sin(theta_[i]);
      const double cp = std::cos(phi_[i]), sp = std::sin(phi_[i]);
      e.col(0) << ct * cp, ct * sp, -st;
      e.col(1) << -sp, cp, 0.0;
      break;
    }
    case GridKind::symmetric:
      break;
  }
  return e;
}

std::vector<double> SphereGrid::sample(const std::function<double(const Eigen::VectorXd&)>& f) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = f(point(i));
  return out;
}

std::size_t SphereGrid::coefficient_count() const {
  switch (kind_) {
    case GridKind::circle:
      return 2 * static_cast<std::size_t>(band_limit_) + 1;
    case GridKind::sphere2:
      return static_cast<std::size_t>(band_limit_ + 1) * (band_limit_ + 1);
    case GridKind::symmetric:
      return 1;
  }
  return 0;
}

std::vector<int> SphereGrid::coefficient_degrees() const {
  std::vector<int> deg(coefficient_count());
  switch (kind_) {
    case GridKind::circle:
      deg[0] = 0;
      for (int k = 1; k <= band_limit_; ++k) deg[2 * k - 1] = deg[2 * k] = k;
      break;
    case GridKind::sphere2:
      for (int l = 0; l <= band_limit_; ++l)
        for (int s = 0; s <= 2 * l; ++s) deg[static_cast<std::size_t>(l) * l + s] = l;
      break;
    case GridKind::symmetric:
      deg[0] = 0;
      break;
  }
  return deg;
}

void SphereGrid::check_size(std::span<const double> f) const {
  if (f.size() != size()) {
    throw ShapeError("field has " + std::to_string(f.size()) + " values, grid has " +
                     std::to_string(size()) + " nodes");
  }
}

std::vector<double> SphereGrid::harmonic(int l, int m) const {
  const int am = std::abs(m);
  if (l < 0 || am > l) throw DomainError("harmonic: need 0 <= |m| <= l");
  if (l > band_limit_) {
    throw ResolutionError("harmonic degree " + std::to_string(l) + " exceeds band limit " +
                          std::to_string(band_limit_));
  }
  std::vector<double> coeff(coefficient_count(), 0.0);
  switch (kind_) {
    case GridKind::circle:
      if (l == 0) coeff[0] = 1.0;
      else coeff[m >= 0 ? 2 * l - 1 : 2 * l] = 1.0;
      break;
    case GridKind::sphere2:
      if (am == 0) coeff[static_cast<std::size_t>(l) * l] = 1.0;
      else coeff[static_cast<std::size_t>(l) * l + (m > 0 ? 2 * am - 1 : 2 * am)] = 1.0;
      break;
    case GridKind::symmetric:
      coeff[0] = 1.0;
      break;
  }
  return synthesize(coeff);
}

std::vector<double> SphereGrid::analyze(std::span<const double> f) const {
  check_size(f);
  std::vector<double> a(coefficient_count(), 0.0);
  switch (kind_) {
    case GridKind::symmetric:
      a[0] = f[0] * std::sqrt(weights_[0]);
      break;
    case GridKind::circle: {
      const int N = nlon_;
      const double w = 2.0 * kPi / N;
      double s0 = 0.0;
      for (int j = 0; j < N; ++j) s0 += f[j];
      a[0] = w * s0 / std::sqrt(2.0 * kPi);
      for (int k = 1; k <= band_limit_; ++k) {
        double sc = 0.0, ss = 0.0;
        for (int j = 0; j < N; ++j) {
          sc += f[j] * cos_table_[static_cast<std::size_t>(k) * N + j];
          ss += f[j] * sin_table_[static_cast<std::size_t>(k) * N + j];
        }
        a[2 * k - 1] = w * sc / std::sqrt(kPi);
        a[2 * k] = w * ss / std::sqrt(kPi);
      }
      break;
    }
    case GridKind::sphere2: {
      const int L = band_limit_;
      const std::size_t nlm = static_cast<std::size_t>(L + 1) * (L + 2) / 2;
      std::vector<double> fc(L + 1), fs(L + 1);
      for (int i = 0; i < nlat_; ++i) {
        const double* row = &f[static_cast<std::size_t>(i) * nlon_];
        const double wlat = weights_[static_cast<std::size_t>(i) * nlon_] ;  // includes 2π/nlon
        for (int m = 0; m <= L; ++m) {
          double sc = 0.0, ss = 0.0;
          const double* ct = &cos_table_[static_cast<std::size_t>(m) * nlon_];
          const double* st = &sin_table_[static_cast<std::size_t>(m) * nlon_];
          for (int j = 0; j < nlon_; ++j) {
            sc += row[j] * ct[j];
            ss += row[j] * st[j];
          }
          const double fm = m == 0 ? 1.0 : kSqrt2;
          fc[m] = wlat * fm * sc;
          fs[m] = wlat * fm * ss;
        }
        const double* p = &legendre_[i * nlm];
        for (int l = 0; l <= L; ++l) {
          const std::size_t base = static_cast<std::size_t>(l) * l;
          a[base] += fc[0] * p[lm_index(l, 0)];
          for (int m = 1; m <= l; ++m) {
            a[base + 2 * m - 1] += fc[m] * p[lm_index(l, m)];
            a[base + 2 * m] += fs[m] * p[lm_index(l, m)];
          }
        }
      }
      break;
    }
  }
  return a;
}

std::vector<double> SphereGrid::synthesize(std::span<const double> a) const {
  if (a.size() != coefficient_count()) throw ShapeError("synthesize: coefficient count mismatch");
  std::vector<double> f(size(), 0.0);
  switch (kind_) {
    case GridKind::symmetric:
      f[0] = a[0] / std::sqrt(weights_[0]);
      break;
    case GridKind::circle: {
      const int N = nlon_;
      for (int j = 0; j < N; ++j) {
        double v = a[0] / std::sqrt(2.0 * kPi);
        for (int k = 1; k <= band_limit_; ++k) {
          v += (a[2 * k - 1] * cos_table_[static_cast<std::size_t>(k) * N + j] +
                a[2 * k] * sin_table_[static_cast<std::size_t>(k) * N + j]) /
               std::sqrt(kPi);
        }
        f[j] = v;
      }
      break;
    }
    case GridKind::sphere2: {
      const int L = band_limit_;
      const std::size_t nlm = static_cast<std::size_t>(L + 1) * (L + 2) / 2;
      std::vector<double> A(L + 1), B(L + 1);
      for (int i = 0; i < nlat_; ++i) {
        const double* p = &legendre_[i * nlm];
        std::fill(A.begin(), A.end(), 0.0);
        std::fill(B.begin(), B.end(), 0.0);
        for (int l = 0; l <= L; ++l) {
          const std::size_t base = static_cast<std::size_t>(l) * l;
          A[0] += a[base] * p[lm_index(l, 0)];
          for (int m = 1; m <= l; ++m) {
            A[m] += kSqrt2 * a[base + 2 * m - 1] * p[lm_index(l, m)];
            B[m] += kSqrt2 * a[base + 2 * m] * p[lm_index(l, m)];
          }
        }
        for (int j = 0; j < nlon_; ++j) {
          double v = A[0];
          for (int m = 1; m <= L; ++m) {
            v += A[m] * cos_table_[static_cast<std::size_t>(m) * nlon_ + j] +
                 B[m] * sin_table_[static_cast<std::size_t>(m) * nlon_ + j];
          }
          f[static_cast<std::size_t>(i) * nlon_ + j] = v;
        }
      }
      break;
    }
  }
  return f;
}

FrameDerivatives SphereGrid::differentiate(std::span<const double> f) const {
  check_size(f);
  FrameDerivatives d;
  d.gradient.assign(size(), {0.0, 0.0});
  d.hessian.assign(size(), {0.0, 0.0, 0.0});
  d.laplacian.assign(size(), 0.0);
  if (kind_ == GridKind::symmetric) return d;

  const std::vector<double> a = analyze(f);
  if (kind_ == GridKind::circle) {
    const int N = nlon_;
    for (int j = 0; j < N; ++j) {
      double d1 = 0.0, d2 = 0.0;
      for (int k = 1; k <= band_limit_; ++k) {
        const double c = cos_table_[static_cast<std::size_t>(k) * N + j];
        const double s = sin_table_[static_cast<std::size_t>(k) * N + j];
        const double ac = a[2 * k - 1] / std::sqrt(kPi);
        const double as = a[2 * k] / std::sqrt(kPi);
        d1 += k * (-ac * s + as * c);
        d2 += -static_cast<double>(k) * k * (ac * c + as * s);
      }
      d.gradient[j] = {d1, 0.0};
      d.hessian[j] = {d2, 0.0, 0.0};
      d.laplacian[j] = d2;
    }
    return d;
  }

  const int L = band_limit_;
  const std::size_t nlm = static_cast<std::size_t>(L + 1) * (L + 2) / 2;
  // Per-latitude Legendre sums for each order m: value, θ-derivatives and Laplacian.
  std::vector<double> A0(L + 1), B0(L + 1), A1(L + 1), B1(L + 1), A2(L + 1), B2(L + 1), AL(L + 1),
      BL(L + 1);
  for (int i = 0; i < nlat_; ++i) {
    const double* p = &legendre_[i * nlm];
    const double* dp = &dlegendre_[i * nlm];
    const double* d2p = &d2legendre_[i * nlm];
    for (auto* v : {&A0, &B0, &A1, &B1, &A2, &B2, &AL, &BL}) std::fill(v->begin(), v->end(), 0.0);
    for (int l = 0; l <= L; ++l) {
      const std::size_t base = static_cast<std::size_t>(l) * l;
      const double ev = -static_cast<double>(l) * (l + 1);
      for (int m = 0; m <= l; ++m) {
        const double ac = m == 0 ? a[base] : kSqrt2 * a[base + 2 * m - 1];
        const double as = m == 0 ? 0.0 : kSqrt2 * a[base + 2 * m];
        const std::size_t k = lm_index(l, m);
        A0[m] += ac * p[k];
        B0[m] += as * p[k];
        A1[m] += ac * dp[k];
        B1[m] += as * dp[k];
        A2[m] += ac * d2p[k];
        B2[m] += as * d2p[k];
        AL[m] += ev * ac * p[k];
        BL[m] += ev * as * p[k];
      }
    }
    const double theta = theta_[static_cast<std::size_t>(i) * nlon_];
    const double st = std::sin(theta);
    const double cot = std::cos(theta) / st;
    for (int j = 0; j < nlon_; ++j) {
      double ft = 0.0, ftt = 0.0, fp = 0.0, fpp = 0.0, ftp = 0.0, lap = 0.0;
      for (int m = 0; m <= L; ++m) {
        const double c = cos_table_[static_cast<std::size_t>(m) * nlon_ + j];
        const double s = sin_table_[static_cast<std::size_t>(m) * nlon_ + j];
        ft += A1[m] * c + B1[m] * s;
        ftt += A2[m] * c + B2[m] * s;
        fp += m * (-A0[m] * s + B0[m] * c);
        fpp += -static_cast<double>(m) * m * (A0[m] * c + B0[m] * s);
        ftp += m * (-A1[m] * s + B1[m] * c);
        lap += AL[m] * c + BL[m] * s;
      }
      const std::size_t k = static_cast<std::size_t>(i) * nlon_ + j;
      d.gradient[k] = {ft, fp / st};
      d.hessian[k] = {ftt, (ftp - cot * fp) / st, fpp / (st * st) + cot * ft};
      d.laplacian[k] = lap;
    }
  }
  return d;
}

std::vector<double> SphereGrid::laplace_beltrami(std::span<const double> f) const {
  check_size(f);
  if (kind_ == GridKind::symmetric) return std::vector<double>(1, 0.0);
  std::vector<double> a = analyze(f);
  const std::vector<int> deg = coefficient_degrees();
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= eigenvalue(deg[k]);
  return synthesize(a);
}

double SphereGrid::integrate(std::span<const double> f) const {
  check_size(f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
  return s;
}

double SphereGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double SphereGrid::truncation_residual(std::span<const double> f) const {
  const std::vector<double> back = synthesize(analyze(f));
  double err = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    err = std::max(err, std::abs(back[i] - f[i]));
    scale = std::max(scale, std::abs(f[i]));
  }
  return err / scale;
}

}  // namespace mcfa
