#include "sfqfi/reference.hpp"

#include <algorithm>
#include <cmath>

#include "sfqfi/amplitude.hpp"
#include "sfqfi/quadrature.hpp"

namespace sfqfi {

namespace {

cplx window_integral(Momentum p, const ActionFrame& frame, double d, double t_a, double t_b,
                     int panels) {
  constexpr int kPerPanel = 16;
  const Rule r = composite_gauss_legendre(panels, kPerPanel, t_a, t_b);
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    sum += r.weights(i) * std::exp(cplx(0.0, 1.0) * frame(p, cplx(r.nodes(i))).S);
  return d * sum;
}

double radical_inverse(unsigned long i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

}  // namespace

QuadratureResult amplitude_by_quadrature(Momentum p, const LaserField& field, double ip, double t_a,
                                         double t_b, double t_ref, const QuadratureOptions& opts) {
  if (opts.points_per_cycle < 40) throw std::invalid_argument("quadrature: need >= 40 points per cycle");
  if (!(t_b >= t_a)) throw std::invalid_argument("quadrature: window must satisfy t_a <= t_b");
  QuadratureResult out;
  if (t_b == t_a) return out;

  const double d = bound_matrix_element(ip);
  const ActionFrame frame(field, ip, t_ref);
  const double cycles = (t_b - t_a) / field.period();
  int panels = std::max(1, static_cast<int>(std::ceil(cycles * opts.points_per_cycle / 16.0)));

  cplx prev = window_integral(p, frame, d, t_a, t_b, panels);
  bool ok = false;
  for (int k = 0; k < opts.max_doublings; ++k) {
    panels *= 2;
    const cplx next = window_integral(p, frame, d, t_a, t_b, panels);
    out.error = std::abs(next - prev);
    prev = next;
    if (out.error < opts.tolerance) {
      ok = true;
      break;
    }
  }
  if (!ok) throw std::runtime_error("amplitude_by_quadrature: not converged to tolerance");
  out.value = prev;
  out.points = panels * 16;

  if (opts.tails) {
    // Free propagation outside the window: S' = I_p + p^2/2.
    const double e = ip + 0.5 * (p.par * p.par + p.perp * p.perp);
    const cplx i(0.0, 1.0);
    out.value += i * d * (std::exp(i * frame(p, cplx(t_b)).S) - std::exp(i * frame(p, cplx(t_a)).S)) / e;
  }
  return out;
}

std::vector<cplx> blind_root_scan(Momentum p, const LaserField& field, double ip,
                                  const ComplexRegion& region, int n_seeds,
                                  const NewtonOptions& opts) {
  std::vector<cplx> roots;
  if (region.empty() || n_seeds <= 0) return roots;
  const double scale = std::max({1.0, std::abs(region.re_min), std::abs(region.re_max)});
  const double dedupe = 1e-7 * scale;
  for (int i = 1; i <= n_seeds; ++i) {
    const cplx seed(region.re_min + radical_inverse(i, 2) * (region.re_max - region.re_min),
                    region.im_min + radical_inverse(i, 3) * (region.im_max - region.im_min));
    const SaddleTime s = refine_saddle(field, ip, p, seed, opts);
    if (!s.converged || !(s.residual < 1e-10) || !(s.t_ion.imag() > 0.0)) continue;
    if (!region.contains(s.t_ion)) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(),
                                  [&](cplx r) { return std::abs(r - s.t_ion) < dedupe; });
    if (!seen) roots.push_back(s.t_ion);
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return roots;
}

std::vector<cplx> unmatched_roots(const std::vector<cplx>& found, const std::vector<cplx>& known,
                                  double tol) {
  std::vector<cplx> out;
  for (cplx z : found)
    if (std::none_of(known.begin(), known.end(), [&](cplx k) { return std::abs(k - z) < tol; }))
      out.push_back(z);
  return out;
}

}  // namespace sfqfi
