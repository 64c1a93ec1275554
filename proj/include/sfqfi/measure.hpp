#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sfqfi/quadrature.hpp"

namespace sfqfi {

/// Cylindrical momentum grid: p_par on [-p_max, p_max], p_perp on [0, p_max],
///   int d^3p f = 2 pi sum_ij w_i w_j p_perp_j f(p_par_i, p_perp_j).
struct MomentumGrid {
  Rule par;
  Rule perp;
  double p_max = 0.0;
  Eigen::ArrayXXd weights;  // 2 pi w_i w_j p_perp_j, shape (n_par, n_perp)

  Eigen::Index n_par() const { return par.size(); }
  Eigen::Index n_perp() const { return perp.size(); }
};

/// p_max with p_max^2 / 2 = 2 U_p + 10 w (direct cutoff plus margin).
double default_p_max(double up, double omega);

/// Single Gauss-Legendre rule per axis (node counts >= 16).
MomentumGrid build_grid(double p_max, int n_par, int n_perp);

/// Composite Gauss-Legendre grid with square panels of side `panel`; p_max is
/// rounded up to a multiple of `panel` so panel edges sit on multiples of it.
MomentumGrid build_panel_grid(double p_max, double panel, int per_panel);

double integrate(const MomentumGrid& grid, const Eigen::ArrayXXd& f);

/// Disjoint regions covering every grid node; `label(i, j)` is the region.
struct BinPartition {
  enum class Kind { FullMomentum, CoarseMomentum, Yield };
  Kind kind = Kind::Yield;
  double width = 0.0;
  Eigen::ArrayXXi label;
  int n_regions = 0;
};

BinPartition full_partition(const MomentumGrid& grid);
BinPartition yield_partition(const MomentumGrid& grid);
/// Squares of side dp with edges at integer multiples of dp.
BinPartition coarse_partition(const MomentumGrid& grid, double dp);

/// Weighted sums of f over each region (fixed node order).
Eigen::ArrayXd partition_sums(const MomentumGrid& grid, const Eigen::ArrayXXd& f,
                              const BinPartition& part);

/// Radial-angular grid used for energy spectra. Radial panels are aligned to
/// the energy bin edges so that coarse spectral bins are integrated exactly.
struct SpectralGrid {
  Rule radial;                       // nodes in |p|
  Rule angle;                        // polar angle on [0, pi]
  std::vector<double> energy_edges;  // ascending, starting at 0
  Eigen::ArrayXi bin;                // energy bin of each radial node (-1 past last edge)
  Eigen::ArrayXd energy;             // E = p^2/2 at the radial nodes
  Eigen::ArrayXd energy_weight;      // dE weights: p w_p
};

/// Uniform energy bins of width dE up to p_max^2/2; each bin is split into
/// radial sub-panels no wider than `resolution` in |p|.
SpectralGrid build_spectral_grid(double p_max, double dE, double resolution = 0.01,
                                 int per_panel = 6, int n_theta = 96);
/// Same with explicit energy edges.
SpectralGrid build_spectral_grid(const std::vector<double>& edges, double resolution = 0.01,
                                 int per_panel = 6, int n_theta = 96);

/// Precomputed bicubic (4x4 Lagrange) interpolation from a momentum grid onto
/// the (|p|, theta) nodes of a spectral grid.
class SpectralMap {
 public:
  SpectralMap(const MomentumGrid& grid, const SpectralGrid& spec);

  /// P(E) = int dOmega f(E, theta) p at each radial node (azimuth gives 2 pi).
  Eigen::ArrayXd spectrum(const Eigen::ArrayXXd& f) const;

  const SpectralGrid& grid() const { return spec_; }

 private:
  SpectralGrid spec_;
  Eigen::ArrayXi par_start_, perp_start_;
  Eigen::ArrayXXd par_w_, perp_w_;  // (4, n_points)
  Eigen::ArrayXd point_weight_;     // 2 pi w_theta sin(theta) p
};

struct EnergySpectrum {
  Eigen::ArrayXd energy;
  Eigen::ArrayXd weight;
  Eigen::ArrayXd density;
};

EnergySpectrum energy_spectrum(const MomentumGrid& grid, const Eigen::ArrayXXd& prob,
                               const SpectralGrid& spec);

/// Integral of a spectral density over each energy bin.
Eigen::ArrayXd spectral_bin_sums(const SpectralGrid& spec, const Eigen::ArrayXd& density);

}  // namespace sfqfi
