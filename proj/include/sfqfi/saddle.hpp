#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sfqfi/field.hpp"

namespace sfqfi {

/// Final photoelectron momentum in cylindrical coordinates (a.u.).
struct Momentum {
  double par = 0.0;
  double perp = 0.0;
};

/// Ionization event labels.
///
/// Event k is tied to the k-th zero of A(t) (a field extremum): for p = 0 its
/// saddle sits at Re t = t_k. The closed-form monochromatic label (e, n) is
/// recovered as e = 0, n = (k+1)/2 for odd k and e = 1, n = k/2 + 1 for even k.
struct EventLabel {
  int e = 0;
  long n = 0;
};
EventLabel label_of_event(long k);
long event_of_label(int e, long n);

struct SaddleTime {
  cplx t_ion;
  long event = 0;
  int e = 0;
  long n = 0;
  double residual = 0.0;
  bool converged = true;
};

struct SaddleSet {
  std::vector<SaddleTime> entries;  // sorted by Re(t_ion)
  double window_min = 0.0;
  double window_max = 0.0;
  bool intra_pairs_included = false;
  int n_channels = 0;
  int n_failed = 0;
};

/// Which ionization events enter the amplitude.
struct ChannelSelection {
  enum class Anchor {
    After,  // first events with t_k >= t_start
    Peak,   // events closest to the envelope peak t = 0
    All     // both branches of every event with |t_k| <= span (Gaussian)
  };
  int n_channels = 1;
  bool intra_pairs = false;
  Anchor anchor = Anchor::After;
  double t_start = 0.0;
  /// Leading channels dropped after anchoring.
  int skip = 0;
  /// Half-width of the Anchor::All window in units of tau.
  double span_tau = 1.5;
};

/// Event indices (ascending in time) picked by `sel`. Intercycle-only
/// selections keep the parity of the event nearest the envelope peak
/// (Gaussian) or of the first eligible event (monochromatic).
std::vector<long> select_events(const LaserField& field, const ChannelSelection& sel);

/// Saddle equation residual g(t) = (p_par + A(t))^2 + p_perp^2 + 2 Ip.
cplx saddle_residual(const LaserField& field, double ip, Momentum p, cplx t);

/// Closed-form monochromatic saddle time t_{en}, branch with Im t > 0.
cplx mono_saddle_time(const LaserField& field, double ip, Momentum p, int e, long n);

/// Monochromatic saddle set for cycles n in [n_first, n_last].
SaddleSet mono_saddle_times(Momentum p, const LaserField& field, double ip, long n_first,
                            long n_last, bool both_branches = true);

struct NewtonOptions {
  int max_iter = 50;
  int max_halvings = 8;
  double tolerance = 1e-12;
};

/// Damped complex Newton on the saddle equation from `seed`.
SaddleTime refine_saddle(const LaserField& field, double ip, Momentum p, cplx seed,
                         const NewtonOptions& opts = {});

/// Seed for event k. Monochromatic: the closed form. Gaussian: continuation
/// in s of F(t) cos(w t + phi) = s c from the real zero t_k (s = 0) to the
/// saddle (s = 1), which keeps far-from-peak events on their own root.
cplx pulse_seed(const LaserField& field, double ip, Momentum p, long event);

/// Saddle times for the listed events at a single momentum (either envelope).
SaddleSet pulse_saddle_times(Momentum p, const LaserField& field, double ip,
                             const std::vector<long>& events, const NewtonOptions& opts = {});

/// Action bundle at (possibly complex) time t with reference time t_ref:
///   S      = Ip t + 1/2 int_{t_ref}^t (p + A)^2
///   dS_dUp = (p_par int A + int A^2) / (2 U_p)
///   S_dd   = (p_par + A(t)) dA/dt(t)
struct ActionBundle {
  cplx S;
  cplx dS_dUp;
  cplx S_dd;
};

/// Caches the antiderivatives at t_ref so repeated bundle evaluations only
/// need the upper endpoint.
class ActionFrame {
 public:
  ActionFrame(const LaserField& field, double ip, double t_ref);

  ActionBundle operator()(Momentum p, cplx t) const;
  double t_ref() const { return t_ref_; }

 private:
  LaserField field_;
  double ip_;
  double t_ref_;
  cplx anti_a_ref_;
  cplx anti_a2_ref_;
};

ActionBundle action_bundle(Momentum p, cplx t_eval, const LaserField& field, double ip,
                           double t_ref);

/// Default global reference time: -3 tau (Gaussian) or `window_start` (mono).
double default_reference_time(const LaserField& field, double window_start);

/// Saddle times of one event on a tensor momentum grid, by continuation.
struct SaddleGrid {
  long event = 0;
  Eigen::ArrayXXcd t;          // (n_par, n_perp)
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> converged;
  double max_residual = 0.0;
  int n_failed = 0;
  int label_jumps = 0;         // points where continuation and homotopy disagree
};

/// Solves event `event` on the grid p_par x p_perp (both ascending). The
/// path starts at the p_par node nearest zero on the first p_perp row, walks
/// up that column, then sweeps each row outward; every point is seeded from
/// its predecessor (linear extrapolation when two are available). Rows are
/// independent once the anchor column is known.
SaddleGrid solve_saddle_grid(const LaserField& field, double ip, const Eigen::ArrayXd& p_par,
                             const Eigen::ArrayXd& p_perp, long event,
                             const NewtonOptions& opts = {});

}  // namespace sfqfi
