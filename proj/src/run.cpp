#include "sfqfi/run.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include "json.hpp"

#include "sfqfi/incoherent.hpp"

namespace sfqfi {

namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double get(const std::map<std::string, double>& m, const char* k) {
  auto it = m.find(k);
  return it == m.end() ? kNaN : it->second;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json to_json(const FisherReport& r) {
  json cfi = json::object(), unc = json::object();
  for (const auto& [k, v] : r.cfi) cfi[k] = number_or_null(v);
  for (const auto& [k, v] : r.uncertainty_pct) unc[k] = number_or_null(v);
  return {{"t_eval", number_or_null(r.t_eval)},
          {"qf", number_or_null(r.qf)},
          {"alpha", number_or_null(r.alpha)},
          {"yield_total", number_or_null(r.yield_total)},
          {"n_measurements", r.n_measurements},
          {"up", r.up},
          {"cfi", cfi},
          {"uncertainty_pct", unc}};
}

std::vector<double> sweep_values(const SweepSpec& s) {
  std::vector<double> x;
  if (s.points == 1) return {s.from};
  for (int i = 0; i < s.points; ++i) {
    const double f = static_cast<double>(i) / (s.points - 1);
    x.push_back(s.log_spacing ? s.from * std::pow(s.to / s.from, f) : s.from + f * (s.to - s.from));
  }
  return x;
}

void fit_uncertainty_exponents(SweepResult& res) {
  std::vector<double> x;
  for (const auto& row : res.rows) x.push_back(row.x);
  for (const char* k : {"optimal", "full", "coarse", "yield", "spec", "spec_coarse"}) {
    std::vector<double> y;
    for (const auto& row : res.rows) y.push_back(get(row.report.uncertainty_pct, k));
    if (res.rows.size() >= 2 && !std::isnan(y.front())) res.exponents[k] = fit_power_law(x, y);
  }
}

SweepRow make_row(double x, FisherReport r) {
  SweepRow row{x, std::move(r), false};
  row.depleted = row.report.yield_total > kDepletionThreshold;
  if (row.depleted)
    std::cerr << "warning: total yield " << row.report.yield_total << " exceeds " << kDepletionThreshold
              << " at sweep value " << x << " (depletion not modelled)\n";
  return row;
}

}  // namespace

OutcomeSample outcome_sample(const RunSpec& spec, EnsemblePovm povm, double intensity_wcm2) {
  const Workspace ws(spec);
  const AmplitudeGrid amp = ws.amplitudes(spec.t_final);
  const MomentumGrid& g = ws.grid();
  BinPartition part;
  switch (povm) {
    case EnsemblePovm::Full: part = full_partition(g); break;
    case EnsemblePovm::Coarse: part = coarse_partition(g, spec.povm.dp); break;
    case EnsemblePovm::Yield: part = yield_partition(g); break;
  }
  const Eigen::ArrayXXd prob = amp.m.abs2();
  const Eigen::ArrayXXd deriv = 2.0 * (amp.m.conjugate() * amp.m_g).real();
  const Eigen::ArrayXd p = partition_sums(g, prob, part);
  const Eigen::ArrayXd d = partition_sums(g, deriv, part);
  // U_p is proportional to I, so d/dI = (U_p / I) d/dU_p.
  const double scale = spec.field.up / intensity_wcm2;
  OutcomeSample s;
  s.prob.resize(p.size() + 1);
  s.dprob.resize(p.size() + 1);
  s.prob.head(p.size()) = p;
  s.dprob.head(p.size()) = scale * d;
  s.prob(p.size()) = 1.0 - p.sum();
  s.dprob(p.size()) = -scale * d.sum();
  return s;
}

double ensemble_fisher(const RunConfig& cfg, double intensity_wcm2) {
  EnsembleSpec ens = cfg.ensemble;
  if (ens.fluct) {
    ens.fluct->sigma *= intensity_wcm2;
    ens.fluct->delta *= intensity_wcm2;
  }
  // One momentum grid for every sampled intensity, so outcome sets line up.
  RunConfig fixed = cfg;
  if (!(fixed.run.grid.p_max > 0.0)) {
    const double top = intensity_wcm2 + (ens.fluct ? ens.fluct->delta : 0.0);
    const RunSpec s = spec_at_intensity(cfg, top);
    fixed.run.grid.p_max = default_p_max(s.field.up, s.field.omega);
  }
  MicroscopicSampler micro = [&](double intensity, double cep) {
    RunSpec s = spec_at_intensity(fixed, intensity);
    s.field.cep = cep;
    return outcome_sample(s, cfg.ensemble_povm, intensity);
  };
  const double f_intensity = combined_cfi(micro, ens, intensity_wcm2, cfg.run.field.cep);
  const double up = spec_at_intensity(cfg, intensity_wcm2).field.up;
  return f_intensity * (intensity_wcm2 / up) * (intensity_wcm2 / up);
}

FisherReport run_config_point(const RunConfig& cfg, Diagnostics* diag) {
  FisherReport r = run_point(cfg.run, diag);
  if (cfg.ensemble_enabled()) {
    r.cfi["ensemble"] = ensemble_fisher(cfg, cfg.intensity_wcm2);
    fill_uncertainties(r);
  }
  return r;
}

double fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::domain_error("fit_power_law: need two positive points");
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw std::domain_error("fit_power_law: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

SweepResult run_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep.variable", "no sweep configured");
  const SweepSpec& s = *cfg.sweep;
  SweepResult res;
  res.variable = s.variable;
  using V = SweepSpec::Variable;

  switch (s.variable) {
    case V::Time: {
      const Workspace ws(cfg.run);
      const long k0 = ws.events().front();
      // Vector-potential zeros are half a cycle apart.
      std::vector<long> steps;
      for (long j = static_cast<long>(std::ceil(2.0 * s.from - 1e-9)); 0.5 * j <= s.to + 1e-9; ++j)
        steps.push_back(j);
      if (s.points > 0 && static_cast<int>(steps.size()) > s.points) {
        std::vector<long> picked;
        for (int i = 0; i < s.points; ++i)
          picked.push_back(steps[static_cast<std::size_t>(
              std::llround(static_cast<double>(i) * (steps.size() - 1) / std::max(1, s.points - 1)))]);
        steps = picked;
      }
      std::vector<double> x, q;
      for (long j : steps) {
        const double t = vector_potential_zero(cfg.run.field, k0 + j);
        res.rows.push_back(make_row(0.5 * j, ws.report(t)));
        x.push_back(0.5 * j);
        q.push_back(res.rows.back().report.qf);
      }
      if (res.rows.size() >= 2) res.exponents["qf"] = fit_power_law(x, q);
      break;
    }
    case V::Cycles:
    case V::Intensity: {
      for (double v : sweep_values(s)) {
        const RunSpec spec = s.variable == V::Cycles ? spec_at_cycles(cfg, v) : spec_at_intensity(cfg, v);
        FisherReport r = run_point(spec);
        if (cfg.ensemble_enabled()) {
          RunConfig c = cfg;
          c.run = spec;
          if (s.variable == V::Cycles) c.cycles_fwhm = v;
          else c.intensity_wcm2 = v;
          r.cfi["ensemble"] = ensemble_fisher(c, c.intensity_wcm2);
          fill_uncertainties(r);
        }
        res.rows.push_back(make_row(v, std::move(r)));
      }
      fit_uncertainty_exponents(res);
      break;
    }
    case V::Dp:
    case V::DE: {
      const Workspace ws(cfg.run);
      const AmplitudeGrid amp = ws.amplitudes(cfg.run.t_final);
      const FisherReport base = ws.report(amp);
      for (double v : sweep_values(s)) {
        FisherReport r = base;
        if (s.variable == V::Dp) r.cfi["coarse"] = ws.coarse_cfi(amp, v);
        else r.cfi["spec_coarse"] = ws.spectral_coarse_cfi(amp, v);
        fill_uncertainties(r);
        res.rows.push_back(make_row(v, std::move(r)));
      }
      break;
    }
  }
  return res;
}

const char* const kCsvHeader =
    "sweep_var,qf,alpha,cfi_full,cfi_coarse,cfi_yield,cfi_spec,cfi_spec_coarse,unc_opt_pct,unc_full_pct,"
    "unc_coarse_pct,unc_yield_pct,unc_spec_pct,unc_spec_coarse_pct,yield_total,depletion_flag";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const FisherReport& r = row.report;
    out << num(row.x) << ',' << num(r.qf) << ',' << num(r.alpha);
    for (const char* k : {"full", "coarse", "yield", "spec", "spec_coarse"}) out << ',' << num(get(r.cfi, k));
    for (const char* k : {"optimal", "full", "coarse", "yield", "spec", "spec_coarse"})
      out << ',' << num(get(r.uncertainty_pct, k));
    out << ',' << num(r.yield_total) << ',' << (row.depleted ? 1 : 0) << '\n';
  }
}

std::string report_to_json(const FisherReport& r, double sweep_var) {
  json j = to_json(r);
  j["sweep_var"] = number_or_null(sweep_var);
  return j.dump();
}

FisherReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  FisherReport r;
  r.t_eval = number_from(j.at("t_eval"));
  r.qf = number_from(j.at("qf"));
  r.alpha = number_from(j.at("alpha"));
  r.yield_total = number_from(j.at("yield_total"));
  r.n_measurements = j.at("n_measurements").get<double>();
  r.up = j.at("up").get<double>();
  for (const auto& [k, v] : j.at("cfi").items()) r.cfi[k] = number_from(v);
  for (const auto& [k, v] : j.at("uncertainty_pct").items()) r.uncertainty_pct[k] = number_from(v);
  return r;
}

void write_json(std::ostream& out, const SweepResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    json j = to_json(row.report);
    j["sweep_var"] = row.x;
    j["depletion_flag"] = row.depleted;
    rows.push_back(std::move(j));
  }
  json exps = json::object();
  for (const auto& [k, v] : result.exponents) exps[k] = number_or_null(v);
  out << json{{"variable", to_string(result.variable)}, {"rows", rows}, {"exponents", exps}}.dump(2) << '\n';
}

void write_report_json(std::ostream& out, const FisherReport& r, const Diagnostics& diag) {
  json j = to_json(r);
  j["depletion_flag"] = r.yield_total > kDepletionThreshold;
  j["diagnostics"] = json::parse(diagnostics_json(diag));
  out << j.dump(2) << '\n';
}

void write_map_csv(std::ostream& out, const MomentumGrid& grid, const AmplitudeGrid& amp) {
  out << "p_par,p_perp,reM,imM,reMg,imMg,prob\n";
  for (Eigen::Index i = 0; i < grid.n_par(); ++i)
    for (Eigen::Index j = 0; j < grid.n_perp(); ++j) {
      const cplx m = amp.m(i, j), g = amp.m_g(i, j);
      out << num(grid.par.nodes(i)) << ',' << num(grid.perp.nodes(j)) << ',' << num(m.real()) << ','
          << num(m.imag()) << ',' << num(g.real()) << ',' << num(g.imag()) << ',' << num(std::norm(m)) << '\n';
    }
}

std::string diagnostics_json(const Diagnostics& d) {
  return json{{"n_saddles", d.n_saddles}, {"n_failed", d.n_failed}, {"max_residual", d.max_residual}}.dump();
}

}  // namespace sfqfi
