#include "sfqfi/incoherent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sfqfi/fisher.hpp"
#include "sfqfi/quadrature.hpp"

namespace sfqfi {

namespace {
constexpr double kPi = std::numbers::pi;

void accumulate(OutcomeSample& acc, const OutcomeSample& s, double wp, double wd) {
  if (acc.prob.size() == 0) {
    acc.prob = Eigen::ArrayXd::Zero(s.prob.size());
    acc.dprob = Eigen::ArrayXd::Zero(s.prob.size());
  }
  if (s.prob.size() != acc.prob.size() || s.dprob.size() != acc.prob.size())
    throw std::invalid_argument("incoherent: samplers must return a fixed outcome count");
  acc.prob += wp * s.prob;
  acc.dprob += wd * s.dprob;
}

// Extent |z|/z0 of the region whose on-axis intensity exceeds u I0.
double zeta_limit(const FocalSpec& s, double u) {
  const double r = 1.0 / u - 1.0;
  const double z = s.literal ? r * r : std::sqrt(r);
  return std::min(z, s.zrange_z0);
}

// int_0^zeta (w/w0)^2 dzeta'.
double waist_area_integral(const FocalSpec& s, double zeta) {
  if (s.literal) return zeta + 4.0 / 3.0 * std::pow(zeta, 1.5) + 0.5 * zeta * zeta;
  return zeta + zeta * zeta * zeta / 3.0;
}
}  // namespace

OutcomeSample cep_average(const PhaseSampler& sampler, int n_phi) {
  if (n_phi < 4) throw std::invalid_argument("cep_average: n_phi must be >= 4");
  OutcomeSample acc;
  for (int j = 0; j < n_phi; ++j) {
    const OutcomeSample s = sampler(2.0 * kPi * j / n_phi);
    accumulate(acc, s, 1.0 / n_phi, 1.0 / n_phi);
  }
  return acc;
}

double focal_shell_density(const FocalSpec& spec, double u) {
  if (!(u > 0.0) || u > 1.0) return 0.0;
  // -dV/du for V(u) = volume with I >= u I0, in units of w0^2 z0.
  return kPi / (2.0 * u) * 2.0 * waist_area_integral(spec, zeta_limit(spec, u));
}

ShellRule focal_shell_weights(const FocalSpec& spec) {
  if (!(spec.w0 > 0.0) || !(spec.z0 > 0.0)) throw std::invalid_argument("focal: w0 and z0 must be positive");
  if (!(spec.zrange_z0 > 0.0) || !std::isfinite(spec.zrange_z0))
    throw std::invalid_argument("focal: z-range must be finite and positive");
  if (!(spec.min_fraction > 0.0 && spec.min_fraction < 1.0))
    throw std::invalid_argument("focal: min_fraction must lie in (0, 1)");
  if (spec.n_nodes < 2) throw std::invalid_argument("focal: need at least 2 nodes");
  // h(u) has a kink where the isointensity surface reaches the z-range edge.
  const double z = spec.zrange_z0;
  const double kink = spec.literal ? 1.0 / (1.0 + std::sqrt(z)) : 1.0 / (1.0 + z * z);
  std::vector<std::pair<double, double>> pieces;
  if (kink > spec.min_fraction && kink < 1.0)
    pieces = {{spec.min_fraction, kink}, {kink, 1.0}};
  else
    pieces = {{spec.min_fraction, 1.0}};
  ShellRule r;
  r.u.resize(spec.n_nodes * static_cast<Eigen::Index>(pieces.size()));
  r.weight.resizeLike(r.u);
  Eigen::Index k = 0;
  for (auto [a, b] : pieces) {
    const Rule g = gauss_legendre(spec.n_nodes, a, b);
    for (Eigen::Index i = 0; i < g.size(); ++i, ++k) {
      r.u(k) = g.nodes(i);
      r.weight(k) = g.weights(i) * focal_shell_density(spec, g.nodes(i));
    }
  }
  r.weight /= r.weight.sum();
  return r;
}

OutcomeSample focal_average(const IntensitySampler& sampler, const FocalSpec& spec, double i0) {
  const ShellRule r = focal_shell_weights(spec);
  OutcomeSample acc;
  for (Eigen::Index k = 0; k < r.u.size(); ++k)
    accumulate(acc, sampler(r.u(k) * i0), r.weight(k), r.weight(k) * r.u(k));
  return acc;
}

OutcomeSample fluct_average(const IntensitySampler& sampler, const FluctSpec& spec, double i0) {
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("fluct: sigma must be positive");
  const double delta = spec.delta > 0.0 ? spec.delta : 6.0 * spec.sigma;
  if (delta < 4.0 * spec.sigma) throw std::invalid_argument("fluct: delta must be >= 4 sigma");
  if (spec.n_nodes < 2) throw std::invalid_argument("fluct: need at least 2 nodes");
  // Rule on the offset I - I0 so the nodes stay symmetric for tiny sigma.
  const Rule g = gauss_legendre(spec.n_nodes, -delta, delta);
  const Eigen::ArrayXd x = g.nodes / spec.sigma;
  Eigen::ArrayXd f = g.weights * (-0.5 * x.square()).exp();
  f /= f.sum();
  OutcomeSample acc;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    OutcomeSample s = sampler(i0 + g.nodes(k));
    // The weight derivative multiplies P itself, not P'.
    s.dprob = s.prob;
    accumulate(acc, s, f(k), f(k) * x(k) / spec.sigma);
  }
  return acc;
}

OutcomeSample combined_distribution(const MicroscopicSampler& micro, const EnsembleSpec& ens,
                                    double i0, double cep0) {
  IntensitySampler cep_layer = [&](double intensity) {
    if (!ens.cep_n_phi) return micro(intensity, cep0);
    return cep_average([&](double phi) { return micro(intensity, phi); }, *ens.cep_n_phi);
  };
  IntensitySampler focal_layer = [&](double intensity) {
    if (!ens.focal) return cep_layer(intensity);
    return focal_average(cep_layer, *ens.focal, intensity);
  };
  if (ens.fluct) return fluct_average(focal_layer, *ens.fluct, i0);
  return focal_layer(i0);
}

double combined_cfi(const MicroscopicSampler& micro, const EnsembleSpec& ens, double i0, double cep0) {
  const OutcomeSample s = combined_distribution(micro, ens, i0, cep0);
  return classical_fisher(s.prob, s.dprob);
}

}  // namespace sfqfi
