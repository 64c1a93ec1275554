#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "sfqfi/field.hpp"
#include "sfqfi/saddle.hpp"

namespace sfqfi {

/// Brute-force oracles. They share no code path with the saddle-point
/// machinery beyond the field and the action.

struct QuadratureOptions {
  int points_per_cycle = 64;   // starting density; at least 40
  int max_doublings = 6;
  double tolerance = 1e-6;     // absolute, between successive densities
  /// Add the analytic free-propagation tails outside the window. Only valid
  /// when A vanishes outside it (pulsed fields).
  bool tails = true;
};

struct QuadratureResult {
  cplx value;
  double error = 0.0;  // |I(2n) - I(n)| of the last refinement
  int points = 0;
};

/// M(p) = int d e^{i S(p,t)} dt over [t_a, t_b] by composite Gauss-Legendre,
/// refined until two successive densities agree. With `tails`, the integral
/// is extended to +-infinity assuming S' = I_p + p^2/2 outside the window.
/// Throws std::runtime_error if the tolerance is not reached.
QuadratureResult amplitude_by_quadrature(Momentum p, const LaserField& field, double ip, double t_a,
                                         double t_b, double t_ref, const QuadratureOptions& opts = {});

/// Central difference with one Richardson step (h and h/2).
template <class F>
auto fd_derivative(F&& f, double g, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_derivative: step must be positive");
  auto central = [&](double s) {
    auto hi = f(g + s);
    auto lo = f(g - s);
    if (!std::isfinite(std::abs(hi)) || !std::isfinite(std::abs(lo)))
      throw std::domain_error("fd_derivative: non-finite sample");
    return (hi - lo) / (2.0 * s);
  };
  auto d1 = central(h);
  auto d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

struct ComplexRegion {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  bool empty() const { return !(re_max > re_min) || !(im_max > im_min); }
};

/// Saddle-equation roots found by Newton from `n_seeds` Halton points in
/// `region`; kept if converged (residual < 1e-10), Im t > 0 and inside the
/// region. Deduplicated and sorted by real part. Deterministic.
std::vector<cplx> blind_root_scan(Momentum p, const LaserField& field, double ip,
                                  const ComplexRegion& region, int n_seeds,
                                  const NewtonOptions& opts = {});

/// Roots in `found` with no partner in `known` within `tol`.
std::vector<cplx> unmatched_roots(const std::vector<cplx>& found, const std::vector<cplx>& known,
                                  double tol = 1e-6);

}  // namespace sfqfi
