#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sfqfi/amplitude.hpp"
#include "sfqfi/reference.hpp"

using namespace sfqfi;

namespace {
const double kPi = std::numbers::pi;
const LaserField kMono = LaserField::monochromatic(0.44, 0.057, 0.0);
const LaserField kPulse = LaserField::gaussian_cycles(0.44, 0.057, 3, 0.5 * kPi);
constexpr double kIp = 0.5;

// e^{i S(tf)} d/dU_p [e^{-i S(tf)} M]
cplx fd_m_g(Momentum p, const LaserField& field, const std::vector<long>& events, double tf, double t_ref) {
  auto reduced = [&](double g) {
    const LaserField f = field.with_up(g);
    const SaddleSet s = pulse_saddle_times(p, f, kIp, events);
    return std::exp(cplx(0.0, -1.0) * action_bundle(p, cplx(tf), f, kIp, t_ref).S) *
           transition_amplitude(p, s, f, kIp, t_ref);
  };
  return std::exp(cplx(0.0, 1.0) * action_bundle(p, cplx(tf), field, kIp, t_ref).S) *
         fd_derivative(reduced, field.up, 1e-6 * field.up);
}
}  // namespace

TEST_CASE("bound matrix element of the regularised zero-range potential") {
  CHECK(bound_matrix_element(0.5) == doctest::Approx(std::pow(2.0 * kPi, -1.5) * std::pow(0.5, 0.25)).epsilon(1e-15));
  CHECK(bound_matrix_element(0.5) == doctest::Approx(0.05336).epsilon(1e-3));
}

TEST_CASE("intercycle factor and its log derivative") {
  const Momentum p{0.3, 0.3};
  CHECK(intercycle_factor(p, 5, kMono, kIp) == doctest::Approx(16.647720459556148).epsilon(1e-12));
  CHECK(intercycle_log_derivative(p, 5, kMono, kIp) == doctest::Approx(-212.95519596768867).epsilon(1e-10));
  CHECK(intercycle_factor(p, 1, kMono, kIp) == doctest::Approx(1.0));
  CHECK(intercycle_log_derivative(p, 1, kMono, kIp) == doctest::Approx(0.0));
  // on an ATI ring Omega_N = N^2
  const double x_ring = 17 * kMono.omega;  // I_p + U_p + p^2/2
  const double pr = std::sqrt(2.0 * (x_ring - kIp - kMono.up));
  CHECK(intercycle_factor({pr, 0.0}, 7, kMono, kIp) == doctest::Approx(49.0).epsilon(1e-8));
}

TEST_CASE("N-cycle monochromatic amplitude factorizes") {
  const double t_ref = -0.5 * kMono.period();
  for (Momentum p : {Momentum{0.3, 0.3}, Momentum{-0.7, 0.1}, Momentum{0.05, 0.9}}) {
    const double m1 = std::norm(transition_amplitude(p, mono_saddle_times(p, kMono, kIp, 1, 1), kMono, kIp, t_ref));
    const double m5 = std::norm(transition_amplitude(p, mono_saddle_times(p, kMono, kIp, 1, 5), kMono, kIp, t_ref));
    CHECK(std::abs(m5 - intercycle_factor(p, 5, kMono, kIp) * m1) < 1e-8 * 25.0 * m1);
  }
}

TEST_CASE("saddle contribution") {
  ActionBundle b{cplx(1.0, 0.5), cplx(0.0), cplx(0.0, 2.0)};
  const cplx m = saddle_contribution(b, 1.0);
  CHECK(std::abs(m * m - 2.0 * kPi * cplx(0.0, 1.0) / b.S_dd * std::exp(cplx(0.0, 2.0) * b.S)) < 1e-12);
  b.S_dd = 0.0;
  CHECK_THROWS_AS(saddle_contribution(b, 1.0), std::domain_error);
}

TEST_CASE("derivative amplitude agrees with a finite difference in U_p") {
  std::vector<long> events;
  for (long k = -4; k <= 3; ++k) events.push_back(k);
  const double t_ref = -3.0 * kPulse.tau, tf = 3.0 * kPulse.tau;
  for (Momentum p : {Momentum{0.3, 0.3}, Momentum{-0.6, 0.2}, Momentum{0.1, 0.7}}) {
    const SaddleSet s = pulse_saddle_times(p, kPulse, kIp, events);
    const AmplitudePair ap = amplitude_pair(p, tf, s, kPulse, kIp, t_ref);
    CHECK(std::abs(ap.m - transition_amplitude(p, s, kPulse, kIp, t_ref)) < 1e-14);
    CHECK(std::abs(fd_m_g(p, kPulse, events, tf, t_ref) - ap.m_g) < 1e-2 * std::abs(ap.m_g));
  }
}

TEST_CASE("|M| and |M_g| do not depend on the reference time") {
  const Momentum p{0.2, 0.4};
  const SaddleSet s = mono_saddle_times(p, kMono, kIp, 1, 3);
  const double tf = 4.5 * kMono.period();
  const AmplitudePair a = amplitude_pair(p, tf, s, kMono, kIp, -0.5 * kMono.period());
  const AmplitudePair b = amplitude_pair(p, tf, s, kMono, kIp, -7.3);
  CHECK(std::abs(a.m) == doctest::Approx(std::abs(b.m)).epsilon(1e-10));
  CHECK(std::abs(a.m_g) == doctest::Approx(std::abs(b.m_g)).epsilon(1e-10));
  CHECK(std::abs(std::conj(a.m) * a.m_g - std::conj(b.m) * b.m_g) < 1e-10 * std::abs(a.m * a.m_g));
}

TEST_CASE("grid channels reproduce pointwise amplitudes") {
  Eigen::ArrayXd par = Eigen::ArrayXd::LinSpaced(11, -0.9, 0.9);
  Eigen::ArrayXd perp = Eigen::ArrayXd::LinSpaced(5, 0.05, 0.65);
  const std::vector<long> events{-2, -1, 0, 1};
  const double t_ref = -3.0 * kPulse.tau, tf = 3.0 * kPulse.tau;
  const ChannelAmplitudes ch = channel_amplitudes(kPulse, kIp, par, perp, events, t_ref);
  CHECK(ch.n_failed == 0);
  const AmplitudeGrid g = combine_channels(ch, kPulse, kIp, tf);
  for (Eigen::Index i = 0; i < par.size(); i += 3)
    for (Eigen::Index j = 0; j < perp.size(); j += 2) {
      const Momentum p{par(i), perp(j)};
      const AmplitudePair ap = amplitude_pair(p, tf, pulse_saddle_times(p, kPulse, kIp, events), kPulse, kIp, t_ref);
      CHECK(std::abs(g.m(i, j) - ap.m) < 1e-10 * std::abs(ap.m) + 1e-14);
      CHECK(std::abs(g.m_g(i, j) - ap.m_g) < 1e-9 * std::abs(ap.m_g) + 1e-12);
    }
  // causal cut: evaluating before the last event drops it
  const double t_mid = 0.5 * (vector_potential_zero(kPulse, 0) + vector_potential_zero(kPulse, 1));
  const AmplitudeGrid early = combine_channels(ch, kPulse, kIp, t_mid);
  const AmplitudeGrid masked = combine_channels(ch, kPulse, kIp, tf, false, {true, true, true, false});
  CHECK((early.m - masked.m).abs().maxCoeff() < 1e-14);
}

TEST_CASE("final phase derivative on a grid") {
  Eigen::ArrayXd par(2), perp(1);
  par << -0.3, 0.4;
  perp << 0.2;
  const Eigen::ArrayXXd d = final_phase_derivative(kPulse, kIp, par, perp, 100.0, -400.0);
  for (int i = 0; i < 2; ++i)
    CHECK(d(i, 0) == doctest::Approx(action_bundle({par(i), 0.2}, cplx(100.0), kPulse, kIp, -400.0).dS_dUp.real()));
}
