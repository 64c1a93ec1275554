#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>

#include "sfqfi/run.hpp"

using namespace sfqfi;

namespace {
int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

RunConfig small_config(const std::string& extra = "", int channels = 2) {
  return load_config(parse_key_tree_string(
      "field.intensity_wcm2 = 1e14\n"
      "channels.n_channels = " + std::to_string(channels) + "\n"
      "grid.panel = 0.1\n"
      "grid.per_panel = 4\n"
      "povm.n_theta = 32\n" +
      extra));
}

FisherReport sample_report() {
  FisherReport r;
  r.t_eval = 1234.5;
  r.qf = 1.0 / 3.0;
  r.alpha = 1e-5;
  r.yield_total = 2e-5;
  r.n_measurements = 5e4;
  r.up = 0.44;
  r.cfi["full"] = 0.125;
  r.cfi["yield"] = 0.0;
  r.cfi["spec"] = std::nan("");
  fill_uncertainties(r);
  return r;
}
}  // namespace

TEST_CASE("CSV emission") {
  std::ostringstream empty;
  write_csv(empty, {});
  CHECK(empty.str() == std::string(kCsvHeader) + "\n");

  std::ostringstream two;
  write_csv(two, {SweepRow{1.0, sample_report(), false}, SweepRow{2.0, sample_report(), true}});
  CHECK(count_lines(two.str()) == 3);
  const std::string last = two.str().substr(two.str().rfind('\n', two.str().size() - 2) + 1);
  CHECK(last.rfind("2,", 0) == 0);
  CHECK(last.find(",1\n") != std::string::npos);  // depletion flag
  CHECK(two.str().find("nan") != std::string::npos);
}

TEST_CASE("JSON round trip is exact") {
  const FisherReport r = sample_report();
  const FisherReport back = report_from_json(report_to_json(r, 7.0));
  CHECK(back.qf == r.qf);
  CHECK(back.t_eval == r.t_eval);
  CHECK(back.yield_total == r.yield_total);
  CHECK(back.cfi.at("full") == r.cfi.at("full"));
  CHECK(std::isnan(back.cfi.at("spec")));
  CHECK(back.uncertainty_pct.at("optimal") == r.uncertainty_pct.at("optimal"));
  CHECK(std::isnan(back.uncertainty_pct.at("yield")));
  CHECK(report_to_json(back, 7.0) == report_to_json(r, 7.0));
  CHECK_THROWS(report_from_json("{\"qf\": 1}"));
}

TEST_CASE("power-law fit") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  CHECK(fit_power_law(x, y) == doctest::Approx(-1.5));
  CHECK_THROWS(fit_power_law({1.0}, {1.0}));
  CHECK_THROWS(fit_power_law({1.0, 1.0}, {1.0, 2.0}));
  CHECK_THROWS(fit_power_law({1.0, 2.0}, {1.0}));
}

TEST_CASE("outcome sample conserves probability") {
  const RunConfig cfg = small_config();
  const OutcomeSample s = outcome_sample(cfg.run, EnsemblePovm::Coarse, cfg.intensity_wcm2);
  CHECK(s.prob.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s.dprob.sum()) < 1e-12 * s.dprob.abs().maxCoeff());
  CHECK(s.prob.tail(1)(0) > 0.99);
}

TEST_CASE("sweeps produce one row per point") {
  SUBCASE("resolution") {
    const RunConfig cfg = small_config("sweep.variable = dp\nsweep.from = 0.1\nsweep.to = 0.4\nsweep.points = 4\n");
    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 4);
    for (std::size_t i = 1; i < res.rows.size(); ++i)
      CHECK(res.rows[i].report.cfi.at("coarse") <= res.rows[i - 1].report.cfi.at("coarse") * (1 + 1e-12) + 1e-30);
    std::ostringstream os;
    write_csv(os, res.rows);
    CHECK(count_lines(os.str()) == 5);
  }
  SUBCASE("time") {
    const RunConfig cfg =
        small_config("sweep.variable = time\nsweep.from = 1\nsweep.to = 4\n", 1);
    const SweepResult res = run_sweep(cfg);
    CHECK(res.rows.size() == 7);
    REQUIRE(res.exponents.count("qf"));
    CHECK(res.exponents.at("qf") > 1.5);
    std::ostringstream os;
    write_json(os, res);
    CHECK(os.str().find("\"variable\": \"time\"") != std::string::npos);
  }
}

TEST_CASE("ensemble layer in a point run") {
  const RunConfig cfg = small_config("povm.spectral = false\nfluct.sigma_pct = 5\nfluct.n_nodes = 5\n", 1);
  const FisherReport r = run_config_point(cfg);
  REQUIRE(r.cfi.count("ensemble"));
  CHECK(r.cfi.at("ensemble") > 0.0);
  CHECK(r.cfi.at("ensemble") < r.cfi.at("coarse"));
  CHECK(!std::isnan(r.uncertainty_pct.at("ensemble")));
}

TEST_CASE("map and diagnostics emission") {
  const RunConfig cfg = small_config("povm.spectral = false\n", 1);
  const Workspace ws(cfg.run);
  std::ostringstream os;
  write_map_csv(os, ws.grid(), ws.amplitudes(ws.default_t_final()));
  CHECK(count_lines(os.str()) == 1 + ws.grid().n_par() * ws.grid().n_perp());
  CHECK(os.str().rfind("p_par,p_perp,reM,imM,reMg,imMg,prob\n", 0) == 0);
  const std::string d = diagnostics_json(ws.diagnostics());
  CHECK(d.find("\"n_failed\"") != std::string::npos);
}
