#pragma once

#include <map>
#include <string>

#include <Eigen/Dense>

#include "sfqfi/field.hpp"
#include "sfqfi/measure.hpp"

namespace sfqfi {

/// Points or regions whose probability falls below this fraction of the
/// largest one are left out of classical Fisher sums.
inline constexpr double kProbabilityFloor = 1e-15;

/// Q_F = 4 { int |M_g|^2 - |int conj(M) M_g|^2 }.
double quantum_fisher(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g);

/// Total ionization probability Y = int |M|^2.
double total_yield(const MomentumGrid& grid, const Eigen::ArrayXXcd& m);

/// alpha = Y (1 - Y).
double alpha_coefficient(const MomentumGrid& grid, const Eigen::ArrayXXcd& m);

/// Classical Fisher information of discrete outcomes: sum d^2 / p with the
/// probability floor applied relative to max(p).
double classical_fisher(const Eigen::ArrayXd& prob, const Eigen::ArrayXd& deriv,
                        double floor = kProbabilityFloor);

/// Same for densities with quadrature weights: sum w d^2 / p.
double classical_fisher_density(const Eigen::ArrayXd& weight, const Eigen::ArrayXd& prob,
                                const Eigen::ArrayXd& deriv, double floor = kProbabilityFloor);

/// int 4 Re[M_g conj(M)]^2 / |M|^2.
double cfi_full(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g);

/// sum_R 4 Re[int_R conj(M) M_g]^2 / int_R |M|^2.
double cfi_coarse(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g,
                  const BinPartition& part);

double cfi_yield(const MomentumGrid& grid, const Eigen::ArrayXXcd& m, const Eigen::ArrayXXcd& m_g);

/// Spectral CFI from the energy densities P(E) and dP/dU_p(E): continuous
/// (every radial node) or binned over the spectral grid's energy bins.
double cfi_spectral_full(const SpectralGrid& spec, const Eigen::ArrayXd& p, const Eigen::ArrayXd& dp);
double cfi_spectral_coarse(const SpectralGrid& spec, const Eigen::ArrayXd& p, const Eigen::ArrayXd& dp);

/// Relative Cramer-Rao uncertainty in percent: 100 / (sqrt(N F) U_p).
double cramer_rao(double fisher, double n_measurements, double up);

/// ((1/U_p) int_{t0}^{t} A^2)^2, the large-time shape of Q_F / alpha.
double qf_asymptote(const LaserField& field, double t0, double t);

/// Limit of qf_asymptote for a Gaussian pulse integrated over the whole axis.
double qf_asymptote_total(const LaserField& field);

struct FisherReport {
  double t_eval = 0.0;
  double qf = 0.0;
  double alpha = 0.0;
  double yield_total = 0.0;
  double n_measurements = 1.0;
  double up = 0.0;
  std::map<std::string, double> cfi;             // full, coarse, yield, spec, spec_coarse
  std::map<std::string, double> uncertainty_pct;  // the same keys plus "optimal"
};

/// Fills uncertainty_pct from qf/cfi (entries with non-positive F are NaN).
void fill_uncertainties(FisherReport& report);

}  // namespace sfqfi
