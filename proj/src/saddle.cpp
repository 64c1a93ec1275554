#include "sfqfi/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfqfi {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_odd(long k) { return (k % 2 + 2) % 2 == 1; }

double event_time(const LaserField& f, long k) { return vector_potential_zero(f, k); }

// Smallest k with t_k >= t.
long first_event_after(const LaserField& f, double t) {
  const double x = (f.omega * t + f.cep - 0.5 * kPi) / kPi;
  long k = static_cast<long>(std::ceil(x - 1e-12));
  while (event_time(f, k) < t - 1e-9) ++k;
  return k;
}

// Event nearest the envelope peak; ties go to the earlier one.
long peak_event(const LaserField& f) {
  const long k = first_event_after(f, 0.0);
  return std::abs(event_time(f, k - 1)) <= std::abs(event_time(f, k)) + 1e-9 ? k - 1 : k;
}

}  // namespace

EventLabel label_of_event(long k) {
  if (is_odd(k)) return {0, (k + 1) / 2};
  return {1, k / 2 + 1};
}

long event_of_label(int e, long n) { return e == 0 ? 2 * n - 1 : 2 * n - 2; }

std::vector<long> select_events(const LaserField& field, const ChannelSelection& sel) {
  if (sel.n_channels < 1) throw std::invalid_argument("channels: n_channels must be >= 1");
  if (sel.skip < 0) throw std::invalid_argument("channels: skip must be >= 0");
  const int total = sel.n_channels + sel.skip;
  std::vector<long> events;

  if (sel.anchor == ChannelSelection::Anchor::All) {
    if (!field.is_gaussian()) throw std::invalid_argument("channels: 'all' needs a Gaussian envelope");
    const double span = sel.span_tau * field.tau;
    for (long k = first_event_after(field, -span); event_time(field, k) <= span; ++k) events.push_back(k);
    return events;
  }
  if (sel.anchor == ChannelSelection::Anchor::Peak) {
    // Nearest events to t = 0, alternating later/earlier around the peak.
    const long k0 = field.is_gaussian() ? peak_event(field) : first_event_after(field, 0.0);
    const int stride = sel.intra_pairs ? 1 : 2;
    const int want = sel.intra_pairs ? 2 * total : total;
    std::vector<long> picked{k0};
    for (long j = 1; static_cast<int>(picked.size()) < want; ++j) {
      picked.push_back(k0 + j * stride);
      if (static_cast<int>(picked.size()) < want) picked.push_back(k0 - j * stride);
    }
    std::sort(picked.begin(), picked.end());
    const int drop = sel.intra_pairs ? 2 * sel.skip : sel.skip;
    events.assign(picked.begin() + drop, picked.end());
    return events;
  }

  long k = first_event_after(field, sel.t_start);
  if (sel.intra_pairs) {
    for (int c = 0; c < total; ++c)
      if (c >= sel.skip) {
        events.push_back(k + 2 * c);
        events.push_back(k + 2 * c + 1);
      }
    return events;
  }
  if (field.is_gaussian() && is_odd(k) != is_odd(peak_event(field))) ++k;
  for (int c = sel.skip; c < total; ++c) events.push_back(k + 2 * c);
  return events;
}

cplx saddle_residual(const LaserField& field, double ip, Momentum p, cplx t) {
  const cplx v = p.par + vector_potential(field, t);
  return v * v + p.perp * p.perp + 2.0 * ip;
}

namespace {

template <class Amp>
cplx mono_formula(const LaserField& f, double ip, Momentum p, int e, long n, Amp a_local) {
  const double sgn = e == 0 ? 1.0 : -1.0;
  const cplx arg = cplx(-p.par, sgn * std::sqrt(2.0 * ip + p.perp * p.perp)) / a_local;
  return (2.0 * kPi * static_cast<double>(n - e) - sgn * std::acos(arg) - f.cep) / f.omega;
}

}  // namespace

cplx mono_saddle_time(const LaserField& field, double ip, Momentum p, int e, long n) {
  return mono_formula(field, ip, p, e, n, field.amplitude());
}

SaddleSet mono_saddle_times(Momentum p, const LaserField& field, double ip, long n_first,
                            long n_last, bool both_branches) {
  if (field.is_gaussian()) throw std::invalid_argument("mono_saddle_times: needs a monochromatic field");
  SaddleSet set;
  set.intra_pairs_included = both_branches;
  set.n_channels = static_cast<int>(n_last - n_first + 1);
  for (long n = n_first; n <= n_last; ++n)
    for (int e = 0; e <= 1; ++e) {
      if (!both_branches && e == 1) continue;
      SaddleTime s;
      s.t_ion = mono_saddle_time(field, ip, p, e, n);
      s.e = e;
      s.n = n;
      s.event = event_of_label(e, n);
      s.residual = std::abs(saddle_residual(field, ip, p, s.t_ion));
      set.entries.push_back(s);
    }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const SaddleTime& a, const SaddleTime& b) { return a.t_ion.real() < b.t_ion.real(); });
  set.window_min = 2.0 * kPi * static_cast<double>(n_first - 1) / field.omega;
  set.window_max = 2.0 * kPi * static_cast<double>(n_last) / field.omega;
  return set;
}

SaddleTime refine_saddle(const LaserField& field, double ip, Momentum p, cplx seed,
                         const NewtonOptions& opts) {
  SaddleTime s;
  cplx t = seed;
  cplx g = saddle_residual(field, ip, p, t);
  double r = std::abs(g);
  s.converged = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (r < opts.tolerance) {
      s.converged = true;
      break;
    }
    const cplx v = p.par + vector_potential(field, t);
    const cplx dg = 2.0 * v * vector_potential_rate(field, t);
    if (dg == cplx(0.0)) break;
    cplx step = g / dg;
    cplx t_new = t - step;
    cplx g_new = saddle_residual(field, ip, p, t_new);
    for (int h = 0; h < opts.max_halvings && !(std::abs(g_new) < r); ++h) {
      step *= 0.5;
      t_new = t - step;
      g_new = saddle_residual(field, ip, p, t_new);
    }
    const bool stalled = std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t);
    t = t_new;
    g = g_new;
    r = std::abs(g);
    if (stalled) break;
  }
  // Rounding in A(t) at large |t| limits the attainable residual; accept the
  // stall point if it is within the public tolerance.
  if (!s.converged && r < 1e-10) s.converged = true;
  s.t_ion = t;
  s.residual = r;
  if (!(t.imag() > 0.0)) s.converged = false;
  return s;
}

cplx pulse_seed(const LaserField& field, double ip, Momentum p, long event) {
  const EventLabel lab = label_of_event(event);
  if (!field.is_gaussian()) return mono_formula(field, ip, p, lab.e, lab.n, field.amplitude());
  // Homotopy G(t) = F(t) cos(w t + phi) = s c, s: 0 -> 1, from the real zero
  // t_k of A. The sign of Im c is the one that moves the root into Im t > 0.
  const double a = field.amplitude();
  const double tk = event_time(field, event);
  const double slope = vector_potential_rate(field, tk) / a;
  const cplx c = cplx(-p.par, (slope > 0.0 ? 1.0 : -1.0) * std::sqrt(2.0 * ip + p.perp * p.perp)) / a;
  auto newton = [&](cplx t, cplx target, double tol, bool& ok) {
    for (int it = 0; it < 30; ++it) {
      const cplx g = vector_potential(field, t) / a - target;
      const cplx dg = vector_potential_rate(field, t) / a;
      if (dg == cplx(0.0)) break;
      const cplx step = g / dg;
      t -= step;
      if (std::abs(step) < tol * (1.0 + std::abs(t))) {
        ok = true;
        return t;
      }
    }
    ok = false;
    return t;
  };
  cplx t = tk;
  double s = 0.0, ds = 0.125;
  cplx dt_ds = c / slope;  // root velocity, for predictor steps
  while (s < 1.0 && ds > 1e-8) {
    const double s1 = std::min(1.0, s + ds);
    bool ok = false;
    // Intermediate points only guide the path; the endpoint is solved tightly.
    const cplx t1 = newton(t + (s1 - s) * dt_ds, s1 * c, s1 < 1.0 ? 1e-7 : 1e-13, ok);
    // Reject steps that wander too far relative to the prediction.
    if (!ok || std::abs(t1 - t - (s1 - s) * dt_ds) > 0.25 * field.period()) {
      ds *= 0.5;
      continue;
    }
    dt_ds = (t1 - t) / (s1 - s);
    t = t1;
    s = s1;
    ds = std::min(2.0 * ds, 0.5);
  }
  return t;
}

SaddleSet pulse_saddle_times(Momentum p, const LaserField& field, double ip,
                             const std::vector<long>& events, const NewtonOptions& opts) {
  SaddleSet set;
  for (long k : events) {
    SaddleTime s;
    if (field.is_gaussian()) {
      s = refine_saddle(field, ip, p, pulse_seed(field, ip, p, k), opts);
    } else {
      s.t_ion = pulse_seed(field, ip, p, k);
      s.residual = std::abs(saddle_residual(field, ip, p, s.t_ion));
    }
    const EventLabel lab = label_of_event(k);
    s.event = k;
    s.e = lab.e;
    s.n = lab.n;
    if (!s.converged) ++set.n_failed;
    set.entries.push_back(s);
  }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const SaddleTime& a, const SaddleTime& b) { return a.t_ion.real() < b.t_ion.real(); });
  if (!events.empty()) {
    set.window_min = event_time(field, *std::min_element(events.begin(), events.end()));
    set.window_max = event_time(field, *std::max_element(events.begin(), events.end()));
  }
  set.n_channels = static_cast<int>(events.size());
  return set;
}

ActionFrame::ActionFrame(const LaserField& field, double ip, double t_ref)
    : field_(field),
      ip_(ip),
      t_ref_(t_ref),
      anti_a_ref_(antiderivative_A(field, cplx{t_ref})),
      anti_a2_ref_(antiderivative_A2(field, cplx{t_ref})) {}

ActionBundle ActionFrame::operator()(Momentum p, cplx t) const {
  const cplx ia = antiderivative_A(field_, t) - anti_a_ref_;
  const cplx ia2 = antiderivative_A2(field_, t) - anti_a2_ref_;
  const double p2 = p.par * p.par + p.perp * p.perp;
  ActionBundle b;
  b.S = ip_ * t + 0.5 * p2 * (t - t_ref_) + p.par * ia + 0.5 * ia2;
  b.dS_dUp = (p.par * ia + ia2) / (2.0 * field_.up);
  b.S_dd = (p.par + vector_potential(field_, t)) * vector_potential_rate(field_, t);
  return b;
}

ActionBundle action_bundle(Momentum p, cplx t_eval, const LaserField& field, double ip,
                           double t_ref) {
  return ActionFrame(field, ip, t_ref)(p, t_eval);
}

double default_reference_time(const LaserField& field, double window_start) {
  return field.is_gaussian() ? -3.0 * field.tau : window_start;
}

SaddleGrid solve_saddle_grid(const LaserField& field, double ip, const Eigen::ArrayXd& p_par,
                             const Eigen::ArrayXd& p_perp, long event, const NewtonOptions& opts) {
  const Eigen::Index np = p_par.size(), nq = p_perp.size();
  SaddleGrid out;
  out.event = event;
  out.t.resize(np, nq);
  out.converged.resize(np, nq);

  if (!field.is_gaussian()) {
    const EventLabel lab = label_of_event(event);
    for (Eigen::Index j = 0; j < nq; ++j)
      for (Eigen::Index i = 0; i < np; ++i) {
        const Momentum p{p_par(i), p_perp(j)};
        out.t(i, j) = mono_formula(field, ip, p, lab.e, lab.n, field.amplitude());
        out.converged(i, j) = true;
        out.max_residual =
            std::max(out.max_residual, std::abs(saddle_residual(field, ip, p, out.t(i, j))));
      }
    return out;
  }

  // Each point is labelled by the homotopy root of its event; the
  // continuation seed is a cross-check (disagreements count as label jumps)
  // and the fallback when the homotopy fails.
  auto solve = [&](Momentum p, cplx seed, int& jumps) {
    SaddleTime own = refine_saddle(field, ip, p, pulse_seed(field, ip, p, event), opts);
    SaddleTime cont = refine_saddle(field, ip, p, seed, opts);
    if (!own.converged) return cont;
    if (cont.converged && std::abs(cont.t_ion - own.t_ion) > 1e-6 * (1.0 + std::abs(own.t_ion))) ++jumps;
    return own;
  };

  Eigen::Index i0 = 0;
  for (Eigen::Index i = 1; i < np; ++i)
    if (std::abs(p_par(i)) < std::abs(p_par(i0))) i0 = i;

  // Anchor column.
  std::vector<SaddleTime> column(static_cast<size_t>(nq));
  for (Eigen::Index j = 0; j < nq; ++j) {
    const Momentum p{p_par(i0), p_perp(j)};
    cplx seed = pulse_seed(field, ip, p, event);
    if (j >= 2) {
      const double x = (p_perp(j) - p_perp(j - 1)) / (p_perp(j - 1) - p_perp(j - 2));
      seed = column[j - 1].t_ion + x * (column[j - 1].t_ion - column[j - 2].t_ion);
    } else if (j == 1) {
      seed = column[0].t_ion;
    }
    int ignored = 0;
    column[j] = solve(p, seed, ignored);
  }

  int failed = 0, jumps = 0;
  double max_res = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : failed, jumps) reduction(max : max_res)
  for (Eigen::Index j = 0; j < nq; ++j) {
    auto record = [&](Eigen::Index i, const SaddleTime& s) {
      out.t(i, j) = s.t_ion;
      out.converged(i, j) = s.converged;
      if (!s.converged) ++failed;
      max_res = std::max(max_res, s.residual);
    };
    record(i0, column[j]);
    for (int dir : {+1, -1}) {
      cplx prev2 = column[j].t_ion, prev1 = column[j].t_ion;
      Eigen::Index count = 0;
      for (Eigen::Index i = i0 + dir; i >= 0 && i < np; i += dir, ++count) {
        const Momentum p{p_par(i), p_perp(j)};
        cplx seed = prev1;
        if (count >= 1) {
          const double x = (p_par(i) - p_par(i - dir)) / (p_par(i - dir) - p_par(i - 2 * dir));
          seed = prev1 + x * (prev1 - prev2);
        }
        const SaddleTime s = solve(p, seed, jumps);
        record(i, s);
        prev2 = prev1;
        prev1 = s.t_ion;
      }
    }
  }
  out.n_failed = failed;
  out.label_jumps = jumps;
  out.max_residual = max_res;
  return out;
}

}  // namespace sfqfi
