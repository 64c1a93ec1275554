#pragma once

#include <Eigen/Dense>

namespace sfqfi {

/// Nodes and weights of a one-dimensional quadrature rule.
struct Rule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;

  Eigen::Index size() const { return nodes.size(); }
  template <typename Derived>
  double apply(const Eigen::ArrayBase<Derived>& samples) const {
    return (weights * samples).sum();
  }
};

/// n-point Gauss-Legendre rule mapped to [lo, hi], nodes ascending.
Rule gauss_legendre(int n, double lo, double hi);

/// Composite Gauss-Legendre: `panels` equal panels on [lo, hi] with
/// `per_panel` nodes each.
Rule composite_gauss_legendre(int panels, int per_panel, double lo, double hi);

}  // namespace sfqfi
