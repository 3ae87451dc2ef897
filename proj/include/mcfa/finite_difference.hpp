#pragma once

#include <span>
#include <vector>

namespace mcfa {

/// Fourth-order derivative of uniformly spaced samples (spacing h): central
/// five-point stencil inside, one-sided five-point closures at the two ends
/// on each side. Needs at least 5 samples.
std::vector<double> derivative4(std::span<const double> f, double h);

/// Quintic Hermite interpolant on [0, h] from value, slope and curvature at both ends.
struct QuinticSegment {
  double c[6];

  QuinticSegment(double h, double p0, double v0, double a0, double p1, double v1, double a1);
  double value(double s) const;       ///< s ∈ [0, 1]
  double slope(double s, double h) const;
  double curvature(double s, double h) const;
};

}  // namespace mcfa
