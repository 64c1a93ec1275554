// sfqfi command-line driver: point, sweep, map, tables, verify.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "sfqfi/config.hpp"
#include "sfqfi/run.hpp"
#include "sfqfi/tables.hpp"
#include "sfqfi/verify.hpp"

using namespace sfqfi;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Failures of the numerics (unconverged saddles, oracle disagreement).
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Output stream for a path; "" or "-" is stdout.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot write '" + path + "'");
    os = file.get();
  }
  std::ostream& operator*() { return *os; }
};

void audit_or_throw(const RunSpec& spec) {
  const auto lines = run_audits(spec);
  std::cerr << format_audit_table(lines);
  for (const auto& l : lines)
    if (!l.pass) throw NumericFailure("oracle audit failed: " + l.name);
}

void check_converged(const Diagnostics& d) {
  if (d.n_failed > 0)
    throw NumericFailure(std::to_string(d.n_failed) + " of " + std::to_string(d.n_saddles) +
                         " saddle solves did not converge");
}

int cmd_point(const RunConfig& cfg, bool verify) {
  if (verify) audit_or_throw(cfg.run);
  Diagnostics diag;
  const FisherReport r = run_config_point(cfg, &diag);
  check_converged(diag);
  Sink out(cfg.output.path);
  if (cfg.output.format == "json") {
    write_report_json(*out, r, diag);
  } else {
    write_csv(*out, {SweepRow{cfg.intensity_wcm2, r, r.yield_total > kDepletionThreshold}});
  }
  if (r.yield_total > kDepletionThreshold)
    std::cerr << "warning: total yield " << r.yield_total << " exceeds " << kDepletionThreshold << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& cfg, bool verify) {
  if (!cfg.sweep) throw ConfigError("sweep.variable", "required for the sweep command");
  if (verify) audit_or_throw(cfg.run);
  const SweepResult res = run_sweep(cfg);
  Sink out(cfg.output.path);
  if (cfg.output.format == "json") write_json(*out, res);
  else write_csv(*out, res.rows);
  for (const auto& [k, v] : res.exponents) std::cerr << "fitted exponent (" << k << "): " << v << '\n';
  return 0;
}

int cmd_map(const RunConfig& cfg, const std::string& diag_path) {
  const Workspace ws(cfg.run);
  const Diagnostics d = ws.diagnostics();
  const AmplitudeGrid amp = ws.amplitudes(cfg.run.t_final);
  Sink out(cfg.output.path);
  write_map_csv(*out, ws.grid(), amp);
  if (!diag_path.empty()) {
    Sink dj(diag_path);
    *dj << diagnostics_json(d) << '\n';
  }
  check_converged(d);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const auto lines = run_audits(cfg.run);
  std::cout << format_audit_table(lines);
  for (const auto& l : lines)
    if (!l.pass) return kExitNumeric;
  return 0;
}

int cmd_tables(int per_panel, const std::vector<int>& which) {
  auto want = [&](int t) { return which.empty() || std::find(which.begin(), which.end(), t) != which.end(); };
  const std::pair<int, TableSet> sets[] = {
      {1, TableSet::SingleChannel}, {2, TableSet::Intercycle}, {3, TableSet::IntraInter}};
  const char* titles[] = {"", "single channel", "5 intercycle channels", "5 channels, both branches"};
  for (auto [id, set] : sets) {
    if (!want(id)) continue;
    std::cout << "table " << id << ": sqrt(Q_F/I_F), " << titles[id] << '\n';
    std::cout << format_ratio_table(reproduce_table(set, per_panel)) << '\n';
  }
  if (want(4)) {
    std::cout << "table 4: relative uncertainty (%), 3-cycle 800 nm pulse, all events within 1.5 tau\n";
    std::printf("%10s %10s %10s %10s %10s %10s %10s %s\n", "I/1e14", "N", "QF", "full", "coarse", "yield", "spec",
                "spec_coarse");
    const double rows[][2] = {{1.13e14, 4.3e5}, {1.53e14, 4.1e5}, {1.82e14, 2.1e5}};
    for (const auto& row : rows) {
      const Workspace ws(intensity_comparison_spec(row[0], row[1], 3.0, per_panel));
      const FisherReport r = ws.report();
      auto u = [&](const char* k) { return r.uncertainty_pct.at(k); };
      std::printf("%10.2f %10.2g %10.3g %10.3g %10.3g %10.3g %10.3g %s\n", row[0] / 1e14, row[1], u("optimal"),
                  u("full"), u("coarse"), u("yield"), u("spec"), "n/a (needs povm.spectral_edges)");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical Fisher information for estimating U_p from strong-field ionization"};
  app.require_subcommand(1);
  bool verify = false;
  app.add_flag("--verify", verify, "run the oracle audits before computing; abort on failure");

  std::string config_path;
  auto add_config = [&](CLI::App* sub) { sub->add_option("-c,--config", config_path, "run configuration")->required(); };

  auto* point = app.add_subcommand("point", "single run, Fisher report");
  add_config(point);
  auto* sweep = app.add_subcommand("sweep", "sweep over time, cycles, intensity, dp or dE");
  add_config(sweep);
  auto* map = app.add_subcommand("map", "momentum map of M, M_g and |M|^2");
  add_config(map);
  std::string diag_path;
  map->add_option("--diagnostics", diag_path, "write saddle diagnostics JSON here");
  auto* tables = app.add_subcommand("tables", "reproduce the ratio and uncertainty tables");
  int per_panel = 12;
  std::vector<int> which;
  tables->add_option("--per-panel", per_panel, "Gauss-Legendre nodes per momentum panel")->check(CLI::Range(4, 40));
  tables->add_option("--table", which, "table numbers to run (1-4); default all")->check(CLI::Range(1, 4));
  auto* verify_cmd = app.add_subcommand("verify", "oracle audit table for a configuration");
  add_config(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (tables->parsed()) return cmd_tables(per_panel, which);
    const RunConfig cfg = load_config_file(config_path);
    set_threads(cfg.threads);
    if (point->parsed()) return cmd_point(cfg, verify);
    if (sweep->parsed()) return cmd_sweep(cfg, verify);
    if (map->parsed()) return cmd_map(cfg, diag_path);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
