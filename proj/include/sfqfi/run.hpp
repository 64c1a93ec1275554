#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sfqfi/config.hpp"
#include "sfqfi/fisher.hpp"
#include "sfqfi/pipeline.hpp"

namespace sfqfi {

/// Total yields above this fraction flag the run as depletion-affected.
inline constexpr double kDepletionThreshold = 0.1;

/// Outcome distribution of one microscopic run, with d/dI (per W/cm^2). The
/// last outcome is "not ionized".
OutcomeSample outcome_sample(const RunSpec& spec, EnsemblePovm povm, double intensity_wcm2);

/// Classical Fisher information (per U_p^2) of the ensemble-averaged
/// distribution at the configured intensity.
double ensemble_fisher(const RunConfig& cfg, double intensity_wcm2);

/// Single point for a configuration; adds cfi["ensemble"] when an ensemble
/// layer is configured.
FisherReport run_config_point(const RunConfig& cfg, Diagnostics* diag = nullptr);

struct SweepRow {
  double x = 0.0;
  FisherReport report;
  bool depleted = false;
};

struct SweepResult {
  SweepSpec::Variable variable = SweepSpec::Variable::Time;
  std::vector<SweepRow> rows;
  /// Least-squares log-log slopes: "qf" for time sweeps, uncertainty keys
  /// ("optimal", "full", ...) for cycle and intensity sweeps.
  std::map<std::string, double> exponents;
};

/// Slope of log y against log x (points with non-positive entries skipped).
double fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Sweep points: time offsets are in optical cycles after the first
/// channel's event, sampled at vector-potential zeros.
SweepResult run_sweep(const RunConfig& cfg);

// Emission.
extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string report_to_json(const FisherReport& r, double sweep_var);
FisherReport report_from_json(const std::string& text);
void write_json(std::ostream& out, const SweepResult& result);
void write_report_json(std::ostream& out, const FisherReport& r, const Diagnostics& diag);
/// Columns p_par,p_perp,reM,imM,reMg,imMg,prob.
void write_map_csv(std::ostream& out, const MomentumGrid& grid, const AmplitudeGrid& amp);
std::string diagnostics_json(const Diagnostics& d);

}  // namespace sfqfi
