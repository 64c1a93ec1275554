#include "sfqfi/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sfqfi {

Rule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Rule r{Eigen::ArrayXd(n), Eigen::ArrayXd(n)};
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    r.nodes(i - 1) = mid - half * z;
    r.nodes(n - i) = mid + half * z;
    r.weights(i - 1) = 2.0 * half / ((1.0 - z * z) * dp * dp);
    r.weights(n - i) = r.weights(i - 1);
  }
  return r;
}

Rule composite_gauss_legendre(int panels, int per_panel, double lo, double hi) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need a panel");
  Rule r{Eigen::ArrayXd(panels * per_panel), Eigen::ArrayXd(panels * per_panel)};
  const double width = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k) {
    const Rule p = gauss_legendre(per_panel, lo + k * width, lo + (k + 1) * width);
    r.nodes.segment(k * per_panel, per_panel) = p.nodes;
    r.weights.segment(k * per_panel, per_panel) = p.weights;
  }
  return r;
}

}  // namespace sfqfi
