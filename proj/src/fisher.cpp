#include "sfqfi/fisher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfqfi {

double quantum_fisher(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g) {
  const double norm_g = (grid.weights * m_g.abs2()).sum();
  const cplx overlap = (grid.weights.cast<cplx>() * m.conjugate() * m_g).sum();
  const double qf = 4.0 * (norm_g - std::norm(overlap));
  if (qf < -1e-10 * std::max(1.0, 4.0 * norm_g))
    throw std::runtime_error("quantum_fisher: negative value, integration failed");
  return std::max(qf, 0.0);
}

double total_yield(const MomentumGrid& grid, const Eigen::ArrayXXcd& m) {
  return (grid.weights * m.abs2()).sum();
}

double alpha_coefficient(const MomentumGrid& grid, const Eigen::ArrayXXcd& m) {
  const double y = total_yield(grid, m);
  return y * (1.0 - y);
}

double classical_fisher(const Eigen::ArrayXd& prob, const Eigen::ArrayXd& deriv, double floor) {
  if (prob.size() == 0) throw std::invalid_argument("classical_fisher: empty partition");
  const double cut = floor * prob.maxCoeff();
  double f = 0.0;
  for (Eigen::Index k = 0; k < prob.size(); ++k)
    if (prob(k) > cut && prob(k) > 0.0) f += deriv(k) * deriv(k) / prob(k);
  return f;
}

double classical_fisher_density(const Eigen::ArrayXd& weight, const Eigen::ArrayXd& prob,
                                const Eigen::ArrayXd& deriv, double floor) {
  if (prob.size() == 0) throw std::invalid_argument("classical_fisher: empty partition");
  const double cut = floor * prob.maxCoeff();
  double f = 0.0;
  for (Eigen::Index k = 0; k < prob.size(); ++k)
    if (prob(k) > cut && prob(k) > 0.0) f += weight(k) * deriv(k) * deriv(k) / prob(k);
  return f;
}

double cfi_full(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g) {
  const Eigen::ArrayXXd prob = m.abs2();
  const Eigen::ArrayXXd deriv = 2.0 * (m.conjugate() * m_g).real();
  return classical_fisher_density(grid.weights.reshaped(), prob.reshaped(), deriv.reshaped());
}

double cfi_coarse(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g,
                  const BinPartition& part) {
  const Eigen::ArrayXXd prob = m.abs2();
  const Eigen::ArrayXXd deriv = 2.0 * (m.conjugate() * m_g).real();
  return classical_fisher(partition_sums(grid, prob, part), partition_sums(grid, deriv, part));
}

double cfi_yield(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g) {
  return cfi_coarse(grid, m, m_g, yield_partition(grid));
}

double cfi_spectral_full(const SpectralGrid& spec, const Eigen::ArrayXd& p, const Eigen::ArrayXd& dp) {
  return classical_fisher_density(spec.energy_weight, p, dp);
}

double cfi_spectral_coarse(const SpectralGrid& spec, const Eigen::ArrayXd& p, const Eigen::ArrayXd& dp) {
  return classical_fisher(spectral_bin_sums(spec, p), spectral_bin_sums(spec, dp));
}

double cramer_rao(double fisher, double n_measurements, double up) {
  if (!(fisher > 0.0)) throw std::domain_error("cramer_rao: Fisher information must be positive");
  if (n_measurements < 1.0) throw std::domain_error("cramer_rao: need at least one measurement");
  return 100.0 / (std::sqrt(n_measurements * fisher) * up);
}

double qf_asymptote(const LaserField& field, double t0, double t) {
  const double d = int_A2(field, t0, t) / field.up;
  return d * d;
}

double qf_asymptote_total(const LaserField& field) {
  const double d = int_A2_total(field) / field.up;
  return d * d;
}

void fill_uncertainties(FisherReport& r) {
  auto unc = [&](double f) {
    return f > 0.0 ? cramer_rao(f, r.n_measurements, r.up) : std::numeric_limits<double>::quiet_NaN();
  };
  r.uncertainty_pct["optimal"] = unc(r.qf);
  for (const auto& [k, v] : r.cfi) r.uncertainty_pct[k] = unc(v);
}

}  // namespace sfqfi
