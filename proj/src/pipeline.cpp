#include "sfqfi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfqfi {

MomentumGrid make_grid(const GridSpec& spec, const LaserField& field) {
  const double p_max = spec.p_max > 0.0 ? spec.p_max : default_p_max(field.up, field.omega);
  if (spec.n_par > 0 && spec.n_perp > 0) return build_grid(p_max, spec.n_par, spec.n_perp);
  return build_panel_grid(p_max, spec.panel, spec.per_panel);
}

double default_final_time(const LaserField& field, const std::vector<long>& events) {
  if (field.is_gaussian()) return field.end_time();
  if (events.empty()) throw std::invalid_argument("default_final_time: no channels");
  const long first = *std::min_element(events.begin(), events.end());
  return vector_potential_zero(field, first + 9);
}

Workspace::Workspace(const RunSpec& spec) : spec_(spec) {
  validate(spec.field);
  if (!(spec.ip > 0.0)) throw std::domain_error("ip must be positive");
  grid_ = make_grid(spec.grid, spec.field);
  events_ = select_events(spec.field, spec.channels);
  const double window_start = vector_potential_zero(spec.field, events_.front()) - 0.5 * spec.field.period();
  const double t_ref = default_reference_time(spec.field, window_start);
  ch_ = channel_amplitudes(spec.field, spec.ip, grid_.par.nodes, grid_.perp.nodes, events_, t_ref,
                           spec.newton);
  coarse_ = coarse_partition(grid_, spec.povm.dp);
  if (spec.povm.spectral) {
    const SpectralGrid sg =
        spec.povm.spectral_edges.empty()
            ? build_spectral_grid(grid_.p_max, spec.povm.dE, spec.povm.spectral_resolution,
                                  spec.povm.spectral_per_panel, spec.povm.n_theta)
            : build_spectral_grid(spec.povm.spectral_edges, spec.povm.spectral_resolution,
                                  spec.povm.spectral_per_panel, spec.povm.n_theta);
    spec_map_ = std::make_unique<SpectralMap>(grid_, sg);
  }
}

Diagnostics Workspace::diagnostics() const {
  Diagnostics d;
  d.n_saddles = static_cast<int>(events_.size() * grid_.par.size() * grid_.perp.size());
  d.n_failed = ch_.n_failed;
  d.label_jumps = ch_.label_jumps;
  d.max_residual = ch_.max_residual;
  return d;
}

double Workspace::default_t_final() const {
  if (!std::isnan(spec_.t_final)) return spec_.t_final;
  return default_final_time(spec_.field, events_);
}

AmplitudeGrid Workspace::amplitudes(double t_final, bool causal) const {
  if (std::isnan(t_final)) t_final = default_t_final();
  return combine_channels(ch_, spec_.field, spec_.ip, t_final, causal);
}

double Workspace::coarse_cfi(const AmplitudeGrid& amp, double dp) const {
  return cfi_coarse(grid_, amp.m, amp.m_g, coarse_partition(grid_, dp));
}

double Workspace::spectral_coarse_cfi(const AmplitudeGrid& amp, double dE) const {
  const SpectralGrid sg = build_spectral_grid(grid_.p_max, dE, spec_.povm.spectral_resolution,
                                              spec_.povm.spectral_per_panel, spec_.povm.n_theta);
  const SpectralMap map(grid_, sg);
  const Eigen::ArrayXXd prob = amp.m.abs2();
  const Eigen::ArrayXXd deriv = 2.0 * (amp.m.conjugate() * amp.m_g).real();
  return cfi_spectral_coarse(sg, map.spectrum(prob), map.spectrum(deriv));
}

FisherReport Workspace::report(const AmplitudeGrid& amp) const {
  FisherReport r;
  r.t_eval = amp.t_final;
  r.up = spec_.field.up;
  r.n_measurements = spec_.n_measurements;
  r.qf = quantum_fisher(grid_, amp.m, amp.m_g);
  r.yield_total = total_yield(grid_, amp.m);
  r.alpha = r.yield_total * (1.0 - r.yield_total);
  r.cfi["full"] = cfi_full(grid_, amp.m, amp.m_g);
  r.cfi["coarse"] = cfi_coarse(grid_, amp.m, amp.m_g, coarse_);
  r.cfi["yield"] = cfi_yield(grid_, amp.m, amp.m_g);
  if (spec_map_) {
    const Eigen::ArrayXXd prob = amp.m.abs2();
    const Eigen::ArrayXXd deriv = 2.0 * (amp.m.conjugate() * amp.m_g).real();
    const Eigen::ArrayXd p = spec_map_->spectrum(prob);
    const Eigen::ArrayXd dp = spec_map_->spectrum(deriv);
    r.cfi["spec"] = cfi_spectral_full(spec_map_->grid(), p, dp);
    r.cfi["spec_coarse"] = cfi_spectral_coarse(spec_map_->grid(), p, dp);
  }
  fill_uncertainties(r);
  return r;
}

FisherReport Workspace::report(double t_final) const { return report(amplitudes(t_final)); }

FisherReport run_point(const RunSpec& spec, Diagnostics* diag) {
  const Workspace ws(spec);
  if (diag) *diag = ws.diagnostics();
  return ws.report(spec.t_final);
}

}  // namespace sfqfi
