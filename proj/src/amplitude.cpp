#include "sfqfi/amplitude.hpp"

#include <cmath>
#include <stdexcept>

namespace sfqfi {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Principal root, or its negative when that lies closer to `hint`.
cplx tracked_sqrt(cplx z, cplx hint) {
  const cplx r = std::sqrt(z);
  if (hint == cplx(0.0)) return r;
  return std::abs(r - hint) <= std::abs(r + hint) ? r : -r;
}
}  // namespace

double bound_matrix_element(double ip) {
  if (!(ip > 0.0)) throw std::domain_error("bound_matrix_element: ip must be positive");
  return std::pow(2.0 * kPi, -1.5) * std::pow(ip, 0.25);
}

cplx saddle_contribution(const ActionBundle& b, double d, cplx branch_hint) {
  if (b.S_dd == cplx(0.0)) throw std::domain_error("saddle prefactor: S'' vanishes");
  return tracked_sqrt(2.0 * kPi * kI / b.S_dd, branch_hint) * d * std::exp(kI * b.S);
}

cplx saddle_contribution(const ActionBundle& b, double d) {
  return saddle_contribution(b, d, cplx(0.0));
}

std::vector<cplx> saddle_amplitudes(Momentum p, const SaddleSet& saddles, const LaserField& field,
                                    double ip, double t_ref) {
  const ActionFrame frame(field, ip, t_ref);
  const double d = bound_matrix_element(ip);
  std::vector<cplx> out;
  for (const SaddleTime& s : saddles.entries) {
    if (!s.converged) continue;
    out.push_back(saddle_contribution(frame(p, s.t_ion), d));
  }
  return out;
}

cplx transition_amplitude(Momentum p, const SaddleSet& saddles, const LaserField& field, double ip,
                          double t_ref) {
  cplx m = 0.0;
  for (cplx c : saddle_amplitudes(p, saddles, field, ip, t_ref)) m += c;
  return m;
}

AmplitudePair amplitude_pair(Momentum p, double t_final, const SaddleSet& saddles,
                             const LaserField& field, double ip, double t_ref) {
  const ActionFrame frame(field, ip, t_ref);
  const double d = bound_matrix_element(ip);
  const cplx ds_final = frame(p, cplx{t_final}).dS_dUp;
  AmplitudePair out{0.0, 0.0, p, t_final};
  for (const SaddleTime& s : saddles.entries) {
    if (!s.converged) continue;
    const ActionBundle b = frame(p, s.t_ion);
    const cplx c = saddle_contribution(b, d);
    out.m += c;
    out.m_g += kI * (b.dS_dUp - ds_final) * c;
  }
  return out;
}

cplx derivative_amplitude(Momentum p, double t_final, const SaddleSet& saddles,
                          const LaserField& field, double ip, double t_ref) {
  return amplitude_pair(p, t_final, saddles, field, ip, t_ref).m_g;
}

namespace {
// theta reduced to (-pi/2, pi/2] around the nearest multiple of pi.
double reduced_phase(Momentum p, const LaserField& field, double ip) {
  const double x = ip + field.up + 0.5 * (p.par * p.par + p.perp * p.perp);
  const double theta = kPi * x / field.omega;
  return theta - kPi * std::round(theta / kPi);
}
}  // namespace

double intercycle_factor(Momentum p, int n_cycles, const LaserField& field, double ip) {
  if (n_cycles < 1) throw std::invalid_argument("intercycle_factor: n_cycles must be >= 1");
  const double n = n_cycles;
  const double th = reduced_phase(p, field, ip);
  if (std::abs(th) < 1e-7) return n * n * (1.0 - (n * n - 1.0) * th * th / 3.0);
  const double r = std::sin(n * th) / std::sin(th);
  return r * r;
}

double intercycle_log_derivative(Momentum p, int n_cycles, const LaserField& field, double ip) {
  if (n_cycles < 1) throw std::invalid_argument("intercycle_log_derivative: n_cycles must be >= 1");
  const double n = n_cycles;
  const double th = reduced_phase(p, field, ip);
  double bracket;
  if (std::abs(th) < 1e-5)
    bracket = -(n * n - 1.0) * th / 3.0;
  else
    bracket = n / std::tan(n * th) - 1.0 / std::tan(th);
  return 2.0 * kPi / field.omega * bracket;
}

ChannelAmplitudes channel_amplitudes(const LaserField& field, double ip,
                                     const Eigen::ArrayXd& p_par, const Eigen::ArrayXd& p_perp,
                                     const std::vector<long>& events, double t_ref,
                                     const NewtonOptions& opts) {
  const Eigen::Index np = p_par.size(), nq = p_perp.size();
  ChannelAmplitudes out;
  out.events = events;
  out.p_par = p_par;
  out.p_perp = p_perp;
  out.t_ref = t_ref;
  const ActionFrame frame(field, ip, t_ref);
  const double d = bound_matrix_element(ip);

  Eigen::Index i0 = 0;
  for (Eigen::Index i = 1; i < np; ++i)
    if (std::abs(p_par(i)) < std::abs(p_par(i0))) i0 = i;

  for (long k : events) {
    const SaddleGrid sg = solve_saddle_grid(field, ip, p_par, p_perp, k, opts);
    out.n_failed += sg.n_failed;
    out.label_jumps += sg.label_jumps;
    out.max_residual = std::max(out.max_residual, sg.max_residual);
    out.event_times.push_back(vector_potential_zero(field, k));

    Eigen::ArrayXXcd m(np, nq), ds(np, nq), root(np, nq);
    auto eval = [&](Eigen::Index i, Eigen::Index j, cplx hint) {
      if (!sg.converged(i, j)) {
        m(i, j) = 0.0;
        ds(i, j) = 0.0;
        root(i, j) = hint;
        return;
      }
      const ActionBundle b = frame({p_par(i), p_perp(j)}, sg.t(i, j));
      if (b.S_dd == cplx(0.0)) throw std::domain_error("saddle prefactor: S'' vanishes");
      root(i, j) = tracked_sqrt(2.0 * kPi * kI / b.S_dd, hint);
      m(i, j) = root(i, j) * d * std::exp(kI * b.S);
      ds(i, j) = b.dS_dUp;
    };
    for (Eigen::Index j = 0; j < nq; ++j) eval(i0, j, j == 0 ? cplx(0.0) : root(i0, j - 1));
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index j = 0; j < nq; ++j) {
      for (Eigen::Index i = i0 + 1; i < np; ++i) eval(i, j, root(i - 1, j));
      for (Eigen::Index i = i0 - 1; i >= 0; --i) eval(i, j, root(i + 1, j));
    }
    out.m.push_back(std::move(m));
    out.ds.push_back(std::move(ds));
  }
  return out;
}

Eigen::ArrayXXd final_phase_derivative(const LaserField& field, double ip,
                                       const Eigen::ArrayXd& p_par, const Eigen::ArrayXd& p_perp,
                                       double t, double t_ref) {
  const double ia = int_A(field, t_ref, t);
  const double ia2 = int_A2(field, t_ref, t);
  Eigen::ArrayXXd out(p_par.size(), p_perp.size());
  for (Eigen::Index j = 0; j < p_perp.size(); ++j)
    out.col(j) = (p_par * ia + ia2) / (2.0 * field.up);
  (void)ip;
  return out;
}

AmplitudeGrid combine_channels(const ChannelAmplitudes& ch, const LaserField& field, double ip,
                               double t_final, bool causal, const std::vector<bool>& mask) {
  const Eigen::Index np = ch.p_par.size(), nq = ch.p_perp.size();
  AmplitudeGrid out;
  out.t_final = t_final;
  out.m = Eigen::ArrayXXcd::Zero(np, nq);
  Eigen::ArrayXXcd g0 = Eigen::ArrayXXcd::Zero(np, nq);
  for (size_t c = 0; c < ch.events.size(); ++c) {
    if (!mask.empty() && !mask[c]) continue;
    if (causal && ch.event_times[c] > t_final) continue;
    out.m += ch.m[c];
    g0 += ch.m[c] * ch.ds[c];
  }
  const Eigen::ArrayXXd dsf = final_phase_derivative(field, ip, ch.p_par, ch.p_perp, t_final, ch.t_ref);
  out.m_g = kI * g0 - kI * dsf * out.m;
  return out;
}

}  // namespace sfqfi
