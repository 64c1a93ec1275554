#include "sfqfi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace sfqfi {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Typed access with key-path errors; remembers which keys were consumed.
class Reader {
 public:
  explicit Reader(const KeyTree& t) : tree_(t) {}

  bool has(const std::string& k) const { return tree_.count(k) > 0; }

  std::optional<std::string> str(const std::string& k) {
    auto it = tree_.find(k);
    if (it == tree_.end()) return std::nullopt;
    used_.insert(k);
    return it->second;
  }

  std::optional<double> num(const std::string& k) {
    auto s = str(k);
    if (!s) return std::nullopt;
    return parse_double(k, *s);
  }

  std::optional<long> integer(const std::string& k) {
    auto s = str(k);
    if (!s) return std::nullopt;
    long v = 0;
    auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || ptr != s->data() + s->size()) throw ConfigError(k, "expected an integer, got '" + *s + "'");
    return v;
  }

  std::optional<bool> flag(const std::string& k) {
    auto s = str(k);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "yes" || *s == "1" || *s == "on") return true;
    if (*s == "false" || *s == "no" || *s == "0" || *s == "off") return false;
    throw ConfigError(k, "expected a boolean, got '" + *s + "'");
  }

  std::optional<std::vector<double>> list(const std::string& k) {
    auto s = str(k);
    if (!s) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(k, trim(item)));
    return out;
  }

  void reject_unused() const {
    for (const auto& [k, v] : tree_)
      if (!used_.count(k)) throw ConfigError(k, "unknown key");
  }

 private:
  static double parse_double(const std::string& k, const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw ConfigError(k, "expected a finite number, got '" + s + "'");
    return v;
  }

  const KeyTree& tree_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

LaserField make_field(const RunConfig& cfg, double intensity, double cycles) {
  const double omega = omega_from_wavelength(cfg.wavelength_nm);
  const double up = up_from_intensity(intensity, cfg.wavelength_nm);
  if (cycles > 0.0) return LaserField::gaussian_cycles(up, omega, cycles, cfg.run.field.cep);
  return LaserField::monochromatic(up, omega, cfg.run.field.cep);
}

}  // namespace

KeyTree parse_key_tree(std::istream& in) {
  KeyTree tree;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', "line " + std::to_string(lineno), "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, "line " + std::to_string(lineno), "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    require(!key.empty(), "line " + std::to_string(lineno), "empty key");
    if (!section.empty()) key = section + "." + key;
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    require(tree.emplace(key, value).second, key, "duplicate key");
  }
  return tree;
}

KeyTree parse_key_tree_string(const std::string& text) {
  std::istringstream in(text);
  return parse_key_tree(in);
}

const char* to_string(SweepSpec::Variable v) {
  switch (v) {
    case SweepSpec::Variable::Time: return "time";
    case SweepSpec::Variable::Cycles: return "cycles";
    case SweepSpec::Variable::Intensity: return "intensity";
    case SweepSpec::Variable::Dp: return "dp";
    case SweepSpec::Variable::DE: return "dE";
  }
  return "?";
}

RunConfig load_config(const KeyTree& tree) {
  Reader r(tree);
  RunConfig cfg;
  RunSpec& run = cfg.run;

  // field
  const bool direct = r.has("field.up") || r.has("field.omega");
  if (direct) {
    require(!r.has("field.intensity_wcm2") && !r.has("field.wavelength_nm"), "field.up",
            "give either field.up/field.omega or field.intensity_wcm2/field.wavelength_nm");
    require(r.has("field.up") && r.has("field.omega"), "field.up", "field.up and field.omega go together");
  }
  cfg.intensity_wcm2 = r.num("field.intensity_wcm2").value_or(cfg.intensity_wcm2);
  cfg.wavelength_nm = r.num("field.wavelength_nm").value_or(cfg.wavelength_nm);
  require(cfg.intensity_wcm2 > 0.0, "field.intensity_wcm2", "must be positive");
  require(cfg.wavelength_nm > 0.0, "field.wavelength_nm", "must be positive");
  run.field.cep = r.num("field.cep_rad").value_or(0.0);
  const std::string env = r.str("field.envelope").value_or("mono");
  require(env == "mono" || env == "gaussian", "field.envelope", "must be 'mono' or 'gaussian'");
  if (env == "gaussian") {
    auto c = r.num("field.cycles_fwhm");
    require(c.has_value(), "field.cycles_fwhm", "required for a gaussian envelope");
    require(*c > 0.0, "field.cycles_fwhm", "must be positive");
    cfg.cycles_fwhm = *c;
  } else {
    require(!r.has("field.cycles_fwhm"), "field.cycles_fwhm", "only valid with envelope = gaussian");
  }
  if (direct) {
    const double up = *r.num("field.up"), omega = *r.num("field.omega");
    require(up > 0.0, "field.up", "must be positive");
    require(omega > 0.0, "field.omega", "must be positive");
    cfg.wavelength_nm = 2.0 * std::numbers::pi * kSpeedOfLight * kBohrRadiusNm / omega;
    cfg.intensity_wcm2 = intensity_from_up(up, cfg.wavelength_nm);
  }
  run.field = make_field(cfg, cfg.intensity_wcm2, cfg.cycles_fwhm);
  if (direct) {
    // Keep the given values exactly rather than their unit round trip.
    const double up = *r.num("field.up"), omega = *r.num("field.omega");
    run.field = cfg.cycles_fwhm > 0.0 ? LaserField::gaussian_cycles(up, omega, cfg.cycles_fwhm, run.field.cep)
                                      : LaserField::monochromatic(up, omega, run.field.cep);
  }
  run.ip = r.num("ip").value_or(0.5);
  require(run.ip > 0.0, "ip", "must be positive");

  // channels
  ChannelSelection& ch = run.channels;
  ch.n_channels = static_cast<int>(r.integer("channels.n_channels").value_or(1));
  require(ch.n_channels >= 1, "channels.n_channels", "must be >= 1");
  ch.intra_pairs = r.flag("channels.intra_pairs").value_or(false);
  const std::string anchor = r.str("channels.anchor").value_or("after");
  if (anchor == "after") ch.anchor = ChannelSelection::Anchor::After;
  else if (anchor == "peak") ch.anchor = ChannelSelection::Anchor::Peak;
  else if (anchor == "all") ch.anchor = ChannelSelection::Anchor::All;
  else throw ConfigError("channels.anchor", "must be 'after', 'peak' or 'all'");
  require(!(ch.anchor == ChannelSelection::Anchor::All && env != "gaussian"), "channels.anchor",
          "'all' needs a gaussian envelope");
  require(!(r.has("channels.t_start") && r.has("channels.t_start_tau")), "channels.t_start",
          "give t_start or t_start_tau, not both");
  if (auto t = r.num("channels.t_start_tau")) {
    require(env == "gaussian", "channels.t_start_tau", "only valid with envelope = gaussian");
    ch.t_start = *t * run.field.tau;
  } else {
    ch.t_start = r.num("channels.t_start").value_or(env == "gaussian" ? -0.5 * run.field.tau : 0.0);
  }
  ch.skip = static_cast<int>(r.integer("channels.skip").value_or(0));
  require(ch.skip >= 0 && ch.skip < ch.n_channels, "channels.skip", "must lie in [0, n_channels)");
  ch.span_tau = r.num("channels.span_tau").value_or(1.5);
  require(ch.span_tau > 0.0, "channels.span_tau", "must be positive");

  // grid
  GridSpec& g = run.grid;
  g.p_max = r.num("grid.p_max").value_or(0.0);
  require(g.p_max >= 0.0, "grid.p_max", "must be >= 0 (0 selects the default)");
  g.n_par = static_cast<int>(r.integer("grid.n_par").value_or(0));
  g.n_perp = static_cast<int>(r.integer("grid.n_perp").value_or(0));
  require((g.n_par == 0) == (g.n_perp == 0), "grid.n_par", "n_par and n_perp go together");
  require(g.n_par == 0 || g.n_par >= 16, "grid.n_par", "must be >= 16");
  require(g.n_perp == 0 || g.n_perp >= 16, "grid.n_perp", "must be >= 16");
  g.panel = r.num("grid.panel").value_or(g.panel);
  require(g.panel > 0.0, "grid.panel", "must be positive");
  g.per_panel = static_cast<int>(r.integer("grid.per_panel").value_or(g.per_panel));
  require(g.per_panel >= 2, "grid.per_panel", "must be >= 2");

  // povm
  PovmSpec& pv = run.povm;
  pv.dp = r.num("povm.dp").value_or(pv.dp);
  require(pv.dp > 0.0, "povm.dp", "must be positive");
  pv.dE = r.num("povm.dE").value_or(pv.dE);
  require(pv.dE > 0.0, "povm.dE", "must be positive");
  pv.spectral = r.flag("povm.spectral").value_or(true);
  if (auto e = r.list("povm.spectral_edges")) {
    require(e->size() >= 2, "povm.spectral_edges", "need at least two edges");
    require(std::is_sorted(e->begin(), e->end()) && std::adjacent_find(e->begin(), e->end()) == e->end() &&
                e->front() >= 0.0,
            "povm.spectral_edges", "must be strictly ascending and non-negative");
    pv.spectral_edges = *e;
  }
  pv.spectral_resolution = r.num("povm.spectral_resolution").value_or(pv.spectral_resolution);
  require(pv.spectral_resolution > 0.0, "povm.spectral_resolution", "must be positive");
  pv.spectral_per_panel = static_cast<int>(r.integer("povm.spectral_per_panel").value_or(pv.spectral_per_panel));
  require(pv.spectral_per_panel >= 4, "povm.spectral_per_panel", "must be >= 4");
  pv.n_theta = static_cast<int>(r.integer("povm.n_theta").value_or(pv.n_theta));
  require(pv.n_theta >= 8, "povm.n_theta", "must be >= 8");

  if (auto t = r.num("time.t_final")) run.t_final = *t;
  run.newton.max_iter = static_cast<int>(r.integer("newton.max_iter").value_or(run.newton.max_iter));
  require(run.newton.max_iter >= 1, "newton.max_iter", "must be >= 1");
  run.newton.tolerance = r.num("newton.tolerance").value_or(run.newton.tolerance);
  require(run.newton.tolerance > 0.0 && run.newton.tolerance <= 1e-10, "newton.tolerance",
          "must lie in (0, 1e-10]");

  run.n_measurements = r.num("n_measurements").value_or(1.0);
  require(run.n_measurements >= 1.0, "n_measurements", "must be >= 1");
  cfg.threads = static_cast<int>(r.integer("threads").value_or(0));
  require(cfg.threads >= 0, "threads", "must be >= 0");

  // sweep
  if (auto v = r.str("sweep.variable")) {
    SweepSpec s;
    if (*v == "time") s.variable = SweepSpec::Variable::Time;
    else if (*v == "cycles") s.variable = SweepSpec::Variable::Cycles;
    else if (*v == "intensity") s.variable = SweepSpec::Variable::Intensity;
    else if (*v == "dp") s.variable = SweepSpec::Variable::Dp;
    else if (*v == "dE") s.variable = SweepSpec::Variable::DE;
    else throw ConfigError("sweep.variable", "must be one of time, cycles, intensity, dp, dE");
    auto from = r.num("sweep.from"), to = r.num("sweep.to");
    require(from.has_value(), "sweep.from", "required");
    require(to.has_value(), "sweep.to", "required");
    s.from = *from;
    s.to = *to;
    require(s.to >= s.from, "sweep.to", "must be >= sweep.from");
    s.points = static_cast<int>(r.integer("sweep.points").value_or(s.variable == SweepSpec::Variable::Time ? 0 : 2));
    if (s.variable == SweepSpec::Variable::Time) require(s.points >= 0, "sweep.points", "must be >= 0");
    else require(s.points >= 1, "sweep.points", "must be >= 1");
    const std::string scale = r.str("sweep.scale").value_or("linear");
    require(scale == "linear" || scale == "log", "sweep.scale", "must be 'linear' or 'log'");
    s.log_spacing = scale == "log";
    if (s.variable == SweepSpec::Variable::Time) require(s.from >= 0.0, "sweep.from", "time offsets must be >= 0");
    else require(s.from > 0.0, "sweep.from", "must be positive");
    require(!(s.variable == SweepSpec::Variable::Cycles && env != "gaussian"), "sweep.variable",
            "cycle sweeps need a gaussian envelope");
    cfg.sweep = s;
  } else {
    for (const char* k : {"sweep.from", "sweep.to", "sweep.points", "sweep.scale"})
      require(!r.has(k), k, "needs sweep.variable");
  }

  // ensemble; fluctuation widths are stored as fractions of I0
  if (r.has("focal.w0_um") || r.has("focal.z0_um") || r.has("focal.zrange_z0") || r.has("focal.min_fraction") ||
      r.has("focal.n_nodes") || r.has("focal.literal")) {
    FocalSpec f;
    cfg.focal_w0_um = r.num("focal.w0_um").value_or(30.0);
    cfg.focal_z0_um = r.num("focal.z0_um").value_or(3500.0);
    require(cfg.focal_w0_um > 0.0, "focal.w0_um", "must be positive");
    require(cfg.focal_z0_um > 0.0, "focal.z0_um", "must be positive");
    f.w0 = cfg.focal_w0_um;
    f.z0 = cfg.focal_z0_um;
    f.zrange_z0 = r.num("focal.zrange_z0").value_or(f.zrange_z0);
    require(f.zrange_z0 > 0.0, "focal.zrange_z0", "must be positive and finite");
    f.min_fraction = r.num("focal.min_fraction").value_or(f.min_fraction);
    require(f.min_fraction > 0.0 && f.min_fraction < 1.0, "focal.min_fraction", "must lie in (0, 1)");
    f.n_nodes = static_cast<int>(r.integer("focal.n_nodes").value_or(f.n_nodes));
    require(f.n_nodes >= 2, "focal.n_nodes", "must be >= 2");
    f.literal = r.flag("focal.literal").value_or(false);
    cfg.ensemble.focal = f;
  }
  if (auto n = r.integer("cep.n_phi")) {
    require(*n >= 4, "cep.n_phi", "must be >= 4");
    cfg.ensemble.cep_n_phi = static_cast<int>(*n);
  }
  if (r.has("fluct.sigma_pct") || r.has("fluct.delta_sigmas") || r.has("fluct.n_nodes")) {
    FluctSpec fl;
    auto s = r.num("fluct.sigma_pct");
    require(s.has_value(), "fluct.sigma_pct", "required when fluctuations are configured");
    require(*s > 0.0 && *s < 50.0, "fluct.sigma_pct", "must lie in (0, 50)");
    fl.sigma = *s / 100.0;
    const double ds = r.num("fluct.delta_sigmas").value_or(6.0);
    require(ds >= 4.0, "fluct.delta_sigmas", "must be >= 4");
    fl.delta = ds * fl.sigma;
    require(fl.delta < 1.0, "fluct.delta_sigmas", "window reaches zero intensity");
    fl.n_nodes = static_cast<int>(r.integer("fluct.n_nodes").value_or(fl.n_nodes));
    require(fl.n_nodes >= 2, "fluct.n_nodes", "must be >= 2");
    cfg.ensemble.fluct = fl;
  }
  if (auto p = r.str("ensemble.povm")) {
    if (*p == "full") cfg.ensemble_povm = EnsemblePovm::Full;
    else if (*p == "coarse") cfg.ensemble_povm = EnsemblePovm::Coarse;
    else if (*p == "yield") cfg.ensemble_povm = EnsemblePovm::Yield;
    else throw ConfigError("ensemble.povm", "must be 'full', 'coarse' or 'yield'");
  }

  cfg.output.path = r.str("output.path").value_or("");
  cfg.output.format = r.str("output.format").value_or("csv");
  require(cfg.output.format == "csv" || cfg.output.format == "json", "output.format", "must be 'csv' or 'json'");

  r.reject_unused();
  try {
    validate(run.field);
  } catch (const std::exception& e) {
    throw ConfigError("field", e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  RunConfig cfg = load_config(parse_key_tree(in));
  if (const char* out = std::getenv("SFQFI_OUTPUT"); out && *out) cfg.output.path = out;
  return cfg;
}

RunSpec spec_at_intensity(const RunConfig& cfg, double intensity_wcm2) {
  if (!(intensity_wcm2 > 0.0)) throw std::domain_error("intensity must be positive");
  RunSpec s = cfg.run;
  s.field = make_field(cfg, intensity_wcm2, cfg.cycles_fwhm);
  s.grid.p_max = cfg.run.grid.p_max;
  return s;
}

RunSpec spec_at_cycles(const RunConfig& cfg, double cycles_fwhm) {
  if (!(cycles_fwhm > 0.0)) throw std::domain_error("cycles must be positive");
  RunSpec s = cfg.run;
  const double old_tau = cfg.run.field.tau;
  s.field = make_field(cfg, cfg.intensity_wcm2, cycles_fwhm);
  // Keep the channel anchor at the same fraction of tau.
  if (old_tau > 0.0) s.channels.t_start = cfg.run.channels.t_start / old_tau * s.field.tau;
  return s;
}

}  // namespace sfqfi
