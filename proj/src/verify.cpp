#include "sfqfi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sfqfi/amplitude.hpp"
#include "sfqfi/reference.hpp"

namespace sfqfi {

namespace {

double halton(unsigned long i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

double reference_time(const RunSpec& spec, const std::vector<long>& events) {
  const double window_start = vector_potential_zero(spec.field, events.front()) - 0.5 * spec.field.period();
  return default_reference_time(spec.field, window_start);
}

double final_time(const RunSpec& spec, const std::vector<long>& events) {
  return std::isnan(spec.t_final) ? default_final_time(spec.field, events) : spec.t_final;
}

AuditLine line(std::string name, double value, double threshold, std::string note = {}) {
  AuditLine l{std::move(name), value, threshold, value < threshold, false, std::move(note)};
  return l;
}

AuditLine skipped(std::string name, std::string note) {
  AuditLine l;
  l.name = std::move(name);
  l.skipped = true;
  l.pass = true;
  l.note = std::move(note);
  return l;
}

}  // namespace

std::vector<Momentum> audit_momenta(const LaserField& field, int n) {
  // Bulk of the direct spectrum: |p_par| <= 0.8 * 2 sqrt(U_p).
  const double a = 0.8 * field.amplitude();
  std::vector<Momentum> ps;
  for (int i = 1; i <= n; ++i)
    ps.push_back({a * (2.0 * halton(i, 2) - 1.0), 0.02 + 0.5 * a * halton(i, 3)});
  return ps;
}

AuditLine audit_grid_residuals(const RunSpec& spec) {
  const Workspace ws(spec);
  const Diagnostics d = ws.diagnostics();
  AuditLine l = line("saddle residuals on grid", d.max_residual, 1e-10);
  l.pass = l.pass && d.n_failed == 0;
  l.note = std::to_string(d.n_saddles) + " saddles, " + std::to_string(d.n_failed) + " failed";
  return l;
}

AuditLine audit_missed_saddles(const RunSpec& spec, const std::vector<Momentum>& ps, int n_seeds) {
  const std::vector<long> events = select_events(spec.field, spec.channels);
  const double T = spec.field.period();
  const double t_lo = vector_potential_zero(spec.field, events.front());
  const double t_hi = vector_potential_zero(spec.field, events.back());
  int extra = 0;
  for (Momentum p : ps) {
    // Every root in the strip belongs to some event; list all of them nearby.
    std::vector<long> near;
    for (long k = events.front() - 3; k <= events.back() + 3; ++k) near.push_back(k);
    const SaddleSet known = pulse_saddle_times(p, spec.field, spec.ip, near, spec.newton);
    std::vector<cplx> kt;
    double im_max = 0.0;
    for (const auto& s : known.entries) {
      if (!s.converged) continue;
      kt.push_back(s.t_ion);
      if (s.t_ion.real() >= t_lo - 0.25 * T && s.t_ion.real() <= t_hi + 0.25 * T)
        im_max = std::max(im_max, s.t_ion.imag());
    }
    const ComplexRegion region{t_lo - 0.25 * T, t_hi + 0.25 * T, 1e-6, 2.0 * im_max};
    const auto found = blind_root_scan(p, spec.field, spec.ip, region, n_seeds, spec.newton);
    extra += static_cast<int>(unmatched_roots(found, kt, 1e-6 * std::max(1.0, std::abs(t_hi))).size());
  }
  return line("blind root scan: unlabelled saddles", extra, 0.5,
              std::to_string(ps.size()) + " momenta");
}

AuditLine audit_derivative_amplitude(const RunSpec& spec, const std::vector<Momentum>& ps) {
  const std::vector<long> events = select_events(spec.field, spec.channels);
  const double t_ref = reference_time(spec, events);
  const double tf = final_time(spec, events);
  const double up = spec.field.up;
  double worst = 0.0;
  for (Momentum p : ps) {
    auto reduced = [&](double g) {
      const LaserField f = spec.field.with_up(g);
      const SaddleSet s = pulse_saddle_times(p, f, spec.ip, events, spec.newton);
      const cplx m = transition_amplitude(p, s, f, spec.ip, t_ref);
      return std::exp(cplx(0.0, -1.0) * action_bundle(p, cplx(tf), f, spec.ip, t_ref).S) * m;
    };
    const SaddleSet s = pulse_saddle_times(p, spec.field, spec.ip, events, spec.newton);
    const AmplitudePair ap = amplitude_pair(p, tf, s, spec.field, spec.ip, t_ref);
    const cplx fd = std::exp(cplx(0.0, 1.0) * action_bundle(p, cplx(tf), spec.field, spec.ip, t_ref).S) *
                    fd_derivative(reduced, up, 1e-6 * up);
    if (std::abs(ap.m_g) > 0.0) worst = std::max(worst, std::abs(fd - ap.m_g) / std::abs(ap.m_g));
  }
  return line("M_g vs finite difference (relative)", worst, 1e-2);
}

AuditLine audit_action_derivative(const RunSpec& spec, const std::vector<Momentum>& ps) {
  const std::vector<long> events = select_events(spec.field, spec.channels);
  const double t_ref = reference_time(spec, events);
  const double up = spec.field.up;
  double worst = 0.0;
  for (Momentum p : ps) {
    const SaddleSet s = pulse_saddle_times(p, spec.field, spec.ip, events, spec.newton);
    for (const auto& st : s.entries) {
      const cplx t = st.t_ion;
      const cplx fd = fd_derivative(
          [&](double g) { return action_bundle(p, t, spec.field.with_up(g), spec.ip, t_ref).S; }, up, 1e-4 * up);
      const cplx an = action_bundle(p, t, spec.field, spec.ip, t_ref).dS_dUp;
      worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
  }
  return line("dS/dU_p vs finite difference", worst, 1e-6);
}

AuditLine audit_intercycle_derivative(const RunSpec& spec, const std::vector<Momentum>& ps) {
  const std::string name = "chi_N vs finite difference";
  if (spec.field.is_gaussian()) return skipped(name, "monochromatic only");
  const int n = std::max(2, spec.channels.n_channels);
  const double up = spec.field.up;
  double worst = 0.0;
  for (Momentum p : ps) {
    const double om = intercycle_factor(p, n, spec.field, spec.ip);
    if (om < 1e-6) continue;  // near a zero of Omega the log derivative is ill-conditioned
    const double fd = fd_derivative(
                          [&](double g) { return std::log(intercycle_factor(p, n, spec.field.with_up(g), spec.ip)); },
                          up, 1e-5 * up);
    const double an = intercycle_log_derivative(p, n, spec.field, spec.ip);
    worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  return line(name, worst, 1e-6);
}

AuditLine audit_quadrature(const RunSpec& spec, const std::vector<Momentum>& ps) {
  const std::string name = "saddle |M|^2 vs time quadrature";
  if (!spec.field.is_gaussian()) return skipped(name, "pulsed fields only");
  ChannelSelection all;
  all.anchor = ChannelSelection::Anchor::All;
  all.span_tau = 1.5;
  const std::vector<long> events = select_events(spec.field, all);
  const double t_ref = -3.0 * spec.field.tau;
  // Candidates are screened on the oracle's own |M|^2: points below 10% of
  // the largest candidate sit in interference minima, where a relative
  // comparison measures fringe position rather than amplitude accuracy.
  const std::vector<Momentum> cand = audit_momenta(spec.field, 8 * static_cast<int>(ps.size()));
  std::vector<double> ex(cand.size()), sp(cand.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const QuadratureResult q = amplitude_by_quadrature(cand[i], spec.field, spec.ip, -3.0 * spec.field.tau,
                                                       3.0 * spec.field.tau, t_ref);
    ex[i] = std::norm(q.value);
    peak = std::max(peak, ex[i]);
  }
  double worst = 0.0, worst_all = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const SaddleSet s = pulse_saddle_times(cand[i], spec.field, spec.ip, events, spec.newton);
    sp[i] = std::norm(transition_amplitude(cand[i], s, spec.field, spec.ip, t_ref));
    if (!(ex[i] > 0.0)) continue;
    const double rel = std::abs(sp[i] - ex[i]) / ex[i];
    if (i < ps.size()) worst_all = std::max(worst_all, rel);
    if (used < ps.size() && ex[i] >= 0.1 * peak) {
      worst = std::max(worst, rel);
      ++used;
    }
  }
  char note[160];
  std::snprintf(note, sizeof note, "%zu momenta above 10%% of peak; unscreened first %zu: %.3f", used, ps.size(),
                worst_all);
  return line(name, worst, 0.2, note);
}

AuditLine audit_factorization(const RunSpec& spec, const std::vector<Momentum>& ps) {
  const std::string name = "|M_N|^2 = Omega_N |M_1|^2";
  if (spec.field.is_gaussian()) return skipped(name, "monochromatic only");
  const int n = std::max(2, spec.channels.n_channels);
  const double t_ref = -0.5 * spec.field.period();
  double worst = 0.0;
  for (Momentum p : ps) {
    const SaddleSet one = mono_saddle_times(p, spec.field, spec.ip, 1, 1);
    const SaddleSet many = mono_saddle_times(p, spec.field, spec.ip, 1, n);
    const double m1 = std::norm(transition_amplitude(p, one, spec.field, spec.ip, t_ref));
    const double mn = std::norm(transition_amplitude(p, many, spec.field, spec.ip, t_ref));
    const double pred = intercycle_factor(p, n, spec.field, spec.ip) * m1;
    // Relative to the envelope N^2 |M_1|^2 so that interference zeros do not dominate.
    worst = std::max(worst, std::abs(mn - pred) / (n * n * m1));
  }
  return line(name, worst, 1e-8);
}

std::vector<AuditLine> run_audits(const RunSpec& spec, const AuditOptions& opts) {
  const std::vector<Momentum> ps = audit_momenta(spec.field, opts.n_momenta);
  std::vector<AuditLine> out;
  if (opts.grid_residuals) out.push_back(audit_grid_residuals(spec));
  out.push_back(audit_missed_saddles(spec, {ps.begin(), ps.begin() + std::min<std::size_t>(4, ps.size())},
                                     opts.root_seeds));
  out.push_back(audit_derivative_amplitude(spec, ps));
  out.push_back(audit_action_derivative(spec, ps));
  out.push_back(audit_intercycle_derivative(spec, ps));
  out.push_back(audit_quadrature(spec, ps));
  out.push_back(audit_factorization(spec, ps));
  return out;
}

std::string format_audit_table(const std::vector<AuditLine>& lines) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-40s %12s %10s  %s\n", "check", "value", "limit", "result");
  os << buf;
  for (const auto& l : lines) {
    if (l.skipped)
      std::snprintf(buf, sizeof buf, "%-40s %12s %10s  SKIP (%s)\n", l.name.c_str(), "-", "-", l.note.c_str());
    else
      std::snprintf(buf, sizeof buf, "%-40s %12.3e %10.1e  %s%s%s\n", l.name.c_str(), l.value, l.threshold,
                    l.pass ? "PASS" : "FAIL", l.note.empty() ? "" : "  ", l.note.c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace sfqfi
