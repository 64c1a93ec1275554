#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "sfqfi/amplitude.hpp"
#include "sfqfi/fisher.hpp"
#include "sfqfi/measure.hpp"
#include "sfqfi/saddle.hpp"

namespace sfqfi {

struct GridSpec {
  double p_max = 0.0;  // 0: default rule
  /// Composite grid: square panels of this side with `per_panel` nodes each.
  double panel = 0.05;
  int per_panel = 10;
  /// Single Gauss-Legendre rule per axis when both counts are set.
  int n_par = 0;
  int n_perp = 0;
};

struct PovmSpec {
  double dp = 0.1;
  double dE = 0.05;
  std::vector<double> spectral_edges;  // overrides dE when non-empty
  double spectral_resolution = 0.01;
  int spectral_per_panel = 6;
  int n_theta = 96;
  bool spectral = true;
};

struct RunSpec {
  LaserField field;
  double ip = 0.5;
  ChannelSelection channels;
  GridSpec grid;
  PovmSpec povm;
  /// Evaluation time; NaN selects the default (end of pulse, or the first
  /// vector-potential zero 4.5 cycles after the first channel for a
  /// monochromatic field).
  double t_final = std::numeric_limits<double>::quiet_NaN();
  double n_measurements = 1.0;
  NewtonOptions newton;
};

struct Diagnostics {
  int n_saddles = 0;
  int n_failed = 0;
  int label_jumps = 0;
  double max_residual = 0.0;
};

MomentumGrid make_grid(const GridSpec& spec, const LaserField& field);
double default_final_time(const LaserField& field, const std::vector<long>& events);

/// Momentum grid, partitions and channel amplitudes for one field; reusable
/// for any evaluation time at or after the channels' ionization.
class Workspace {
 public:
  explicit Workspace(const RunSpec& spec);

  const RunSpec& spec() const { return spec_; }
  const MomentumGrid& grid() const { return grid_; }
  const ChannelAmplitudes& channels() const { return ch_; }
  const std::vector<long>& events() const { return events_; }
  Diagnostics diagnostics() const;

  AmplitudeGrid amplitudes(double t_final, bool causal = true) const;

  /// Full report at t_final (NaN: default evaluation time).
  FisherReport report(double t_final = std::numeric_limits<double>::quiet_NaN()) const;
  FisherReport report(const AmplitudeGrid& amp) const;

  /// CFI of a coarse momentum partition of side dp at the given amplitudes.
  double coarse_cfi(const AmplitudeGrid& amp, double dp) const;
  double spectral_coarse_cfi(const AmplitudeGrid& amp, double dE) const;

  double default_t_final() const;

 private:
  RunSpec spec_;
  MomentumGrid grid_;
  std::vector<long> events_;
  ChannelAmplitudes ch_;
  BinPartition coarse_;
  std::unique_ptr<SpectralMap> spec_map_;
};

FisherReport run_point(const RunSpec& spec, Diagnostics* diag = nullptr);

}  // namespace sfqfi
