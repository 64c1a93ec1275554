#include "sfqfi/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sfqfi {

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::ArrayXXd cylindrical_weights(const Rule& par, const Rule& perp) {
  Eigen::ArrayXXd w(par.size(), perp.size());
  for (Eigen::Index j = 0; j < perp.size(); ++j)
    w.col(j) = 2.0 * kPi * par.weights * perp.weights(j) * perp.nodes(j);
  return w;
}

// Four-node Lagrange stencil around x on ascending nodes.
void stencil(const Eigen::ArrayXd& nodes, double x, int& start, double w[4]) {
  const Eigen::Index n = nodes.size();
  const auto it = std::lower_bound(nodes.data(), nodes.data() + n, x);
  Eigen::Index k = it - nodes.data();  // first node >= x
  Eigen::Index s = std::clamp<Eigen::Index>(k - 2, 0, n - 4);
  start = static_cast<int>(s);
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (x - nodes(s + b)) / (nodes(s + a) - nodes(s + b));
    w[a] = l;
  }
}
}  // namespace

double default_p_max(double up, double omega) { return std::sqrt(2.0 * (2.0 * up + 10.0 * omega)); }

MomentumGrid build_grid(double p_max, int n_par, int n_perp) {
  if (!(p_max > 0.0)) throw std::invalid_argument("grid: p_max must be positive");
  if (n_par < 16 || n_perp < 16) throw std::invalid_argument("grid: node counts must be >= 16");
  MomentumGrid g;
  g.p_max = p_max;
  g.par = gauss_legendre(n_par, -p_max, p_max);
  g.perp = gauss_legendre(n_perp, 0.0, p_max);
  g.weights = cylindrical_weights(g.par, g.perp);
  return g;
}

MomentumGrid build_panel_grid(double p_max, double panel, int per_panel) {
  if (!(p_max > 0.0) || !(panel > 0.0)) throw std::invalid_argument("grid: p_max and panel must be positive");
  if (per_panel < 2) throw std::invalid_argument("grid: need at least 2 nodes per panel");
  const int n = static_cast<int>(std::ceil(p_max / panel - 1e-9));
  MomentumGrid g;
  g.p_max = n * panel;
  g.par = composite_gauss_legendre(2 * n, per_panel, -g.p_max, g.p_max);
  g.perp = composite_gauss_legendre(n, per_panel, 0.0, g.p_max);
  g.weights = cylindrical_weights(g.par, g.perp);
  return g;
}

double integrate(const MomentumGrid& grid, const Eigen::ArrayXXd& f) {
  return (grid.weights * f).sum();
}

BinPartition full_partition(const MomentumGrid& grid) {
  BinPartition p;
  p.kind = BinPartition::Kind::FullMomentum;
  p.label.resize(grid.n_par(), grid.n_perp());
  int r = 0;
  for (Eigen::Index j = 0; j < grid.n_perp(); ++j)
    for (Eigen::Index i = 0; i < grid.n_par(); ++i) p.label(i, j) = r++;
  p.n_regions = r;
  return p;
}

BinPartition yield_partition(const MomentumGrid& grid) {
  BinPartition p;
  p.kind = BinPartition::Kind::Yield;
  p.width = std::numeric_limits<double>::infinity();
  p.label = Eigen::ArrayXXi::Zero(grid.n_par(), grid.n_perp());
  p.n_regions = 1;
  return p;
}

BinPartition coarse_partition(const MomentumGrid& grid, double dp) {
  if (!(dp > 0.0)) throw std::invalid_argument("coarse partition: dp must be positive");
  if (!std::isfinite(dp)) return yield_partition(grid);
  BinPartition p;
  p.kind = BinPartition::Kind::CoarseMomentum;
  p.width = dp;
  p.label.resize(grid.n_par(), grid.n_perp());
  std::map<std::pair<long, long>, int> ids;
  for (Eigen::Index j = 0; j < grid.n_perp(); ++j)
    for (Eigen::Index i = 0; i < grid.n_par(); ++i) {
      const long a = static_cast<long>(std::floor(grid.par.nodes(i) / dp));
      const long b = static_cast<long>(std::floor(grid.perp.nodes(j) / dp));
      auto [it, fresh] = ids.try_emplace({a, b}, static_cast<int>(ids.size()));
      p.label(i, j) = it->second;
    }
  p.n_regions = static_cast<int>(ids.size());
  return p;
}

Eigen::ArrayXd partition_sums(const MomentumGrid& grid, const Eigen::ArrayXXd& f,
                              const BinPartition& part) {
  Eigen::ArrayXd sums = Eigen::ArrayXd::Zero(part.n_regions);
  for (Eigen::Index j = 0; j < grid.n_perp(); ++j)
    for (Eigen::Index i = 0; i < grid.n_par(); ++i)
      sums(part.label(i, j)) += grid.weights(i, j) * f(i, j);
  return sums;
}

SpectralGrid build_spectral_grid(const std::vector<double>& edges, double resolution,
                                 int per_panel, int n_theta) {
  if (edges.size() < 2) throw std::invalid_argument("spectral grid: need at least two energy edges");
  if (edges.front() != 0.0) throw std::invalid_argument("spectral grid: energy edges must start at 0");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("spectral grid: energy edges must be strictly ascending");
  SpectralGrid s;
  s.energy_edges = edges;
  std::vector<double> nodes, weights;
  std::vector<int> bins;
  for (size_t m = 0; m + 1 < edges.size(); ++m) {
    const double p0 = std::sqrt(2.0 * edges[m]), p1 = std::sqrt(2.0 * edges[m + 1]);
    const int sub = std::max(1, static_cast<int>(std::ceil((p1 - p0) / resolution - 1e-9)));
    const Rule r = composite_gauss_legendre(sub, per_panel, p0, p1);
    for (Eigen::Index k = 0; k < r.size(); ++k) {
      nodes.push_back(r.nodes(k));
      weights.push_back(r.weights(k));
      bins.push_back(static_cast<int>(m));
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  s.radial.nodes = Eigen::Map<Eigen::ArrayXd>(nodes.data(), n);
  s.radial.weights = Eigen::Map<Eigen::ArrayXd>(weights.data(), n);
  s.bin = Eigen::Map<Eigen::ArrayXi>(bins.data(), n);
  s.energy = 0.5 * s.radial.nodes.square();
  s.energy_weight = s.radial.nodes * s.radial.weights;
  s.angle = gauss_legendre(n_theta, 0.0, kPi);
  return s;
}

SpectralGrid build_spectral_grid(double p_max, double dE, double resolution, int per_panel,
                                 int n_theta) {
  if (!(dE > 0.0)) throw std::invalid_argument("spectral grid: dE must be positive");
  const double e_max = 0.5 * p_max * p_max;
  std::vector<double> edges{0.0};
  while (edges.back() < e_max - 1e-12) edges.push_back(std::min(edges.back() + dE, e_max));
  return build_spectral_grid(edges, resolution, per_panel, n_theta);
}

SpectralMap::SpectralMap(const MomentumGrid& grid, const SpectralGrid& spec) : spec_(spec) {
  if (grid.n_par() < 4 || grid.n_perp() < 4) throw std::invalid_argument("spectral map: grid too small");
  const Eigen::Index nr = spec.radial.size(), nt = spec.angle.size();
  const Eigen::Index n = nr * nt;
  par_start_.resize(n);
  perp_start_.resize(n);
  par_w_.resize(4, n);
  perp_w_.resize(4, n);
  point_weight_.resize(n);
  for (Eigen::Index r = 0; r < nr; ++r)
    for (Eigen::Index a = 0; a < nt; ++a) {
      const Eigen::Index k = r * nt + a;
      const double p = spec.radial.nodes(r), th = spec.angle.nodes(a);
      double w[4];
      int s;
      stencil(grid.par.nodes, p * std::cos(th), s, w);
      par_start_(k) = s;
      for (int b = 0; b < 4; ++b) par_w_(b, k) = w[b];
      stencil(grid.perp.nodes, p * std::sin(th), s, w);
      perp_start_(k) = s;
      for (int b = 0; b < 4; ++b) perp_w_(b, k) = w[b];
      point_weight_(k) = 2.0 * kPi * spec.angle.weights(a) * std::sin(th) * p;
    }
}

Eigen::ArrayXd SpectralMap::spectrum(const Eigen::ArrayXXd& f) const {
  const Eigen::Index nr = spec_.radial.size(), nt = spec_.angle.size();
  Eigen::ArrayXd out(nr);
  for (Eigen::Index r = 0; r < nr; ++r) {
    double acc = 0.0;
    for (Eigen::Index a = 0; a < nt; ++a) {
      const Eigen::Index k = r * nt + a;
      const int i0 = par_start_(k), j0 = perp_start_(k);
      double v = 0.0;
      for (int b = 0; b < 4; ++b) {
        double row = 0.0;
        for (int c = 0; c < 4; ++c) row += par_w_(c, k) * f(i0 + c, j0 + b);
        v += perp_w_(b, k) * row;
      }
      acc += point_weight_(k) * v;
    }
    out(r) = acc;
  }
  return out;
}

EnergySpectrum energy_spectrum(const MomentumGrid& grid, const Eigen::ArrayXXd& prob,
                               const SpectralGrid& spec) {
  const SpectralMap map(grid, spec);
  return {spec.energy, spec.energy_weight, map.spectrum(prob)};
}

Eigen::ArrayXd spectral_bin_sums(const SpectralGrid& spec, const Eigen::ArrayXd& density) {
  Eigen::ArrayXd sums = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(spec.energy_edges.size()) - 1);
  for (Eigen::Index r = 0; r < density.size(); ++r)
    if (spec.bin(r) >= 0) sums(spec.bin(r)) += spec.energy_weight(r) * density(r);
  return sums;
}

}  // namespace sfqfi
