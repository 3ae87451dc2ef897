#include "mcfa/finite_difference.hpp"

#include "mcfa/errors.hpp"

namespace mcfa {

std::vector<double> derivative4(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw ShapeError("derivative4: need at least 5 samples");
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) * s;
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) * s;
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) * s;
  const std::size_t m = n - 1;
  d[m] = (25 * f[m] - 48 * f[m - 1] + 36 * f[m - 2] - 16 * f[m - 3] + 3 * f[m - 4]) * s;
  d[m - 1] = (3 * f[m] + 10 * f[m - 1] - 18 * f[m - 2] + 6 * f[m - 3] - f[m - 4]) * s;
  return d;
}

QuinticSegment::QuinticSegment(double h, double p0, double v0, double a0, double p1, double v1,
                               double a1) {
  const double dp = p1 - p0;
  const double hv0 = h * v0, hv1 = h * v1;
  const double ha0 = h * h * a0, ha1 = h * h * a1;
  c[0] = p0;
  c[1] = hv0;
  c[2] = 0.5 * ha0;
  c[3] = 10 * dp - 6 * hv0 - 4 * hv1 - 1.5 * ha0 + 0.5 * ha1;
  c[4] = -15 * dp + 8 * hv0 + 7 * hv1 + 1.5 * ha0 - ha1;
  c[5] = 6 * dp - 3 * hv0 - 3 * hv1 - 0.5 * ha0 + 0.5 * ha1;
}

double QuinticSegment::value(double s) const {
  return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
}

double QuinticSegment::slope(double s, double h) const {
  return (c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])))) / h;
}

double QuinticSegment::curvature(double s, double h) const {
  return (2 * c[2] + s * (6 * c[3] + s * (12 * c[4] + s * 20 * c[5]))) / (h * h);
}

}  // namespace mcfa
