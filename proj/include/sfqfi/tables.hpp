#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfqfi/pipeline.hpp"

namespace sfqfi {

/// Channel sets of the ratio tables sqrt(Q_F / I_F).
enum class TableSet {
  SingleChannel,  // the event at the envelope peak
  Intercycle,     // 5 events of one branch, the first after -tau/2
  IntraInter      // both branches of the same 5 cycles
};

/// Standard table field: U_p = 0.44, w = 0.057, I_p = 0.5. Pulses use
/// CEP pi/2 (field maximum at the envelope peak), the monochromatic field
/// CEP 0. `cycles` = 0 selects the monochromatic field.
RunSpec table_spec(TableSet set, double cycles, int per_panel = 12);

/// sqrt(Q_F / I_F) for each measurement key.
std::map<std::string, double> fisher_ratios(const FisherReport& r);

struct TableColumn {
  double cycles = 0.0;
  FisherReport report;
  Diagnostics diag;
  std::map<std::string, double> ratio;
};

/// Columns for 5, 10, 20 cycles and monochromatic, in that order.
std::vector<TableColumn> reproduce_table(TableSet set, int per_panel = 12);

/// 3-cycle 800 nm pulse at the given intensity including every event within
/// 1.5 tau of the peak (the measurement-comparison configuration).
RunSpec intensity_comparison_spec(double intensity_wcm2, double n_measurements, double cycles = 3.0,
                                  int per_panel = 10);

/// Fixed-width text rendering of a ratio table.
std::string format_ratio_table(const std::vector<TableColumn>& cols);

}  // namespace sfqfi
