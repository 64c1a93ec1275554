#include "sfqfi/tables.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace sfqfi {

RunSpec table_spec(TableSet set, double cycles, int per_panel) {
  RunSpec s;
  constexpr double up = 0.44, omega = 0.057;
  s.field = cycles > 0.0 ? LaserField::gaussian_cycles(up, omega, cycles, 0.5 * std::numbers::pi)
                         : LaserField::monochromatic(up, omega, 0.0);
  s.grid.per_panel = per_panel;
  switch (set) {
    case TableSet::SingleChannel:
      s.channels.n_channels = 1;
      s.channels.anchor = ChannelSelection::Anchor::Peak;
      break;
    case TableSet::Intercycle:
    case TableSet::IntraInter:
      s.channels.n_channels = 5;
      s.channels.intra_pairs = set == TableSet::IntraInter;
      s.channels.anchor = ChannelSelection::Anchor::After;
      s.channels.t_start = cycles > 0.0 ? -0.5 * s.field.tau : 0.0;
      break;
  }
  return s;
}

std::map<std::string, double> fisher_ratios(const FisherReport& r) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : r.cfi) out[k] = v > 0.0 ? std::sqrt(r.qf / v) : std::nan("");
  return out;
}

std::vector<TableColumn> reproduce_table(TableSet set, int per_panel) {
  std::vector<TableColumn> cols;
  for (double c : {5.0, 10.0, 20.0, 0.0}) {
    TableColumn col;
    col.cycles = c;
    const Workspace ws(table_spec(set, c, per_panel));
    col.diag = ws.diagnostics();
    col.report = ws.report();
    col.ratio = fisher_ratios(col.report);
    cols.push_back(std::move(col));
  }
  return cols;
}

RunSpec intensity_comparison_spec(double intensity_wcm2, double n_measurements, double cycles, int per_panel) {
  RunSpec s;
  s.field = LaserField::gaussian_cycles(up_from_intensity(intensity_wcm2, 800.0), omega_from_wavelength(800.0),
                                        cycles, 0.5 * std::numbers::pi);
  s.channels.anchor = ChannelSelection::Anchor::All;
  s.channels.span_tau = 1.5;
  s.grid.per_panel = per_panel;
  s.n_measurements = n_measurements;
  return s;
}

std::string format_ratio_table(const std::vector<TableColumn>& cols) {
  std::ostringstream os;
  char buf[128];
  os << "             ";
  for (const auto& c : cols) {
    if (c.cycles > 0.0) std::snprintf(buf, sizeof buf, "%12g", c.cycles);
    else std::snprintf(buf, sizeof buf, "%12s", "mono");
    os << buf;
  }
  os << '\n';
  for (const char* k : {"full", "yield", "coarse", "spec", "spec_coarse"}) {
    std::snprintf(buf, sizeof buf, "%-13s", k);
    os << buf;
    for (const auto& c : cols) {
      auto it = c.ratio.find(k);
      std::snprintf(buf, sizeof buf, "%12.4f", it == c.ratio.end() ? std::nan("") : it->second);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sfqfi
