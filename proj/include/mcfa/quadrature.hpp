#pragma once

#include <cstddef>
#include <vector>

namespace mcfa {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Gauss–Legendre rule with `points` nodes on [-1, 1], nodes ascending.
QuadratureRule gauss_legendre(int points);

/// Composite Gauss–Legendre rule on [a, b]: `panels` equal panels of `points` nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points);

/// Default panel layout for time integrals (64 panels × 32 points).
struct CompositeConfig {
  int panels = 64;
  int points = 32;
};

template <class F>
double integrate(F&& f, double a, double b, CompositeConfig cfg = {}) {
  return composite_gauss_legendre(a, b, cfg.panels, cfg.points).integrate(f);
}

/// Area of the unit n-sphere in R^{n+1}.
double unit_sphere_area(int n);

}  // namespace mcfa
