#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace sfqfi {

/// Outcome probabilities P(mu) and their derivative with respect to the peak
/// intensity I0 (any consistent intensity unit).
struct OutcomeSample {
  Eigen::ArrayXd prob;
  Eigen::ArrayXd dprob;
};

using IntensitySampler = std::function<OutcomeSample(double intensity)>;
using PhaseSampler = std::function<OutcomeSample(double cep)>;

/// Trapezoidal mean over phi_j = 2 pi j / n_phi (periodic integrand).
OutcomeSample cep_average(const PhaseSampler& sampler, int n_phi);

/// Gaussian-beam focal volume with constant target density.
struct FocalSpec {
  double w0 = 1.0;            // beam waist
  double z0 = 1.0;            // Rayleigh range (same length unit as w0)
  double zrange_z0 = 2.0;     // target extends over |z| <= zrange_z0 z0
  double min_fraction = 0.1;  // intensity shells below this fraction of I0 are left out
  int n_nodes = 17;
  /// Alternative printed beam form: w = w0 (1 + sqrt(|z|/z0)) and I ~ (w0/w), instead of
  /// w = w0 sqrt(1 + (z/z0)^2) and I ~ (w0/w)^2.
  bool literal = false;
};

/// Normalised volume density h(u) of intensity shells u = I/I0 on
/// [min_fraction, 1] (unnormalised value; see focal_shell_weights).
double focal_shell_density(const FocalSpec& spec, double u);

/// Quadrature nodes u_k and weights (summing to 1) over intensity shells.
struct ShellRule {
  Eigen::ArrayXd u;
  Eigen::ArrayXd weight;
};
ShellRule focal_shell_weights(const FocalSpec& spec);

/// P_FA(mu|I0) = sum_k h_k P(mu|u_k I0); dP_FA/dI0 = sum_k h_k u_k P'(mu|u_k I0).
OutcomeSample focal_average(const IntensitySampler& sampler, const FocalSpec& spec, double i0);

/// Intensity fluctuations: Gaussian f(I|I0, sigma) truncated to |I - I0| <= delta.
struct FluctSpec {
  double sigma = 0.0;
  double delta = 0.0;  // defaults to 6 sigma when <= 0
  int n_nodes = 21;  // second moment of the 6-sigma window to ~1e-7
};

/// P_IF = int f P dI and its I0-derivative via df/dI0 = (I - I0)/sigma^2 f.
OutcomeSample fluct_average(const IntensitySampler& sampler, const FluctSpec& spec, double i0);

struct EnsembleSpec {
  std::optional<FocalSpec> focal;
  std::optional<int> cep_n_phi;
  std::optional<FluctSpec> fluct;
};

/// Sampler of the microscopic outcome distribution at intensity I and CEP phi.
using MicroscopicSampler = std::function<OutcomeSample(double intensity, double cep)>;

/// P_All = fluct o focal o cep applied to `micro`, evaluated at I0 (the CEP
/// argument is ignored when the CEP layer is off; `cep0` is used instead).
OutcomeSample combined_distribution(const MicroscopicSampler& micro, const EnsembleSpec& ensemble,
                                    double i0, double cep0 = 0.0);

/// Classical Fisher information (per unit I0^2) of the combined distribution.
double combined_cfi(const MicroscopicSampler& micro, const EnsembleSpec& ensemble, double i0,
                    double cep0 = 0.0);

}  // namespace sfqfi
