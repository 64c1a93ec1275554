#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sfqfi/field.hpp"
#include "sfqfi/saddle.hpp"

namespace sfqfi {

/// <q|V|0> for the regularised zero-range potential and its bound state.
/// The regularisation leaves I_p^{1/4} delta(r), so the plane-wave matrix
/// element is the q-independent constant (2 pi)^{-3/2} I_p^{1/4}.
double bound_matrix_element(double ip);

struct AmplitudePair {
  cplx m;
  cplx m_g;
  Momentum p;
  double t_final = 0.0;
};

struct InterferenceOptions {
  int n_channels = 1;
  bool intra_pairs = false;
  bool coherent = true;
};

/// Contribution of one saddle: sqrt(2 pi i / S'') d exp(i S).
/// Throws std::domain_error when S'' vanishes (coalescing saddles).
cplx saddle_contribution(const ActionBundle& b, double d);
cplx saddle_contribution(const ActionBundle& b, double d, cplx branch_hint);

/// Per-saddle amplitudes at one momentum (the incoherent form).
std::vector<cplx> saddle_amplitudes(Momentum p, const SaddleSet& saddles, const LaserField& field,
                                    double ip, double t_ref);

/// M(p) summed over the converged saddles in `saddles`.
cplx transition_amplitude(Momentum p, const SaddleSet& saddles, const LaserField& field, double ip,
                          double t_ref);

/// M_g(p, t_final) = sum sqrt(2 pi i/S'') i d (dS/dU_p(t') - dS/dU_p(t_final)) e^{iS}.
/// The U_p-derivative of d vanishes for the zero-range potential.
cplx derivative_amplitude(Momentum p, double t_final, const SaddleSet& saddles,
                          const LaserField& field, double ip, double t_ref);

AmplitudePair amplitude_pair(Momentum p, double t_final, const SaddleSet& saddles,
                             const LaserField& field, double ip, double t_ref);

/// Intercycle factor Omega_N = sin^2(N theta)/sin^2(theta), theta = pi x/w,
/// x = I_p + U_p + p^2/2; equals N^2 on ATI resonances.
double intercycle_factor(Momentum p, int n_cycles, const LaserField& field, double ip);

/// chi_N with dOmega_N/dU_p = chi_N Omega_N.
double intercycle_log_derivative(Momentum p, int n_cycles, const LaserField& field, double ip);

/// Per-saddle data of a set of events on a tensor momentum grid. Each event
/// stores its amplitude m_s and dS/dU_p at the saddle so that M and M_g at any
/// real evaluation time follow without re-solving:
///   M = sum m_s,  M_g(t) = i sum m_s dS_s - i dS(p, t) M.
struct ChannelAmplitudes {
  std::vector<long> events;
  std::vector<double> event_times;  // real zero of A tied to each event
  std::vector<Eigen::ArrayXXcd> m;
  std::vector<Eigen::ArrayXXcd> ds;
  Eigen::ArrayXd p_par;
  Eigen::ArrayXd p_perp;
  double t_ref = 0.0;
  int n_failed = 0;
  int label_jumps = 0;
  double max_residual = 0.0;
};

/// Solves saddles for each event on the grid and evaluates their
/// contributions. The prefactor root follows the continuation path, starting
/// from the principal branch at the anchor node.
ChannelAmplitudes channel_amplitudes(const LaserField& field, double ip,
                                     const Eigen::ArrayXd& p_par, const Eigen::ArrayXd& p_perp,
                                     const std::vector<long>& events, double t_ref,
                                     const NewtonOptions& opts = {});

struct AmplitudeGrid {
  Eigen::ArrayXXcd m;
  Eigen::ArrayXXcd m_g;
  double t_final = 0.0;
};

/// Coherent M and M_g at t_final using the events whose ionization time lies
/// before t_final (all of them when `causal` is false). `mask` optionally
/// restricts to a subset of channels by position.
AmplitudeGrid combine_channels(const ChannelAmplitudes& ch, const LaserField& field, double ip,
                               double t_final, bool causal = true,
                               const std::vector<bool>& mask = {});

/// dS/dU_p(p, t) for real t on the grid.
Eigen::ArrayXXd final_phase_derivative(const LaserField& field, double ip,
                                       const Eigen::ArrayXd& p_par, const Eigen::ArrayXd& p_perp,
                                       double t, double t_ref);

}  // namespace sfqfi
