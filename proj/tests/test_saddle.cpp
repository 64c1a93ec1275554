#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfqfi/reference.hpp"
#include "sfqfi/saddle.hpp"

using namespace sfqfi;

namespace {
const double kPi = std::numbers::pi;
const LaserField kMono = LaserField::monochromatic(0.44, 0.057, 0.0);
const LaserField kPulse2 = LaserField::gaussian_cycles(0.44, 0.057, 2, 0.0);
constexpr double kIp = 0.5;
}  // namespace

TEST_CASE("event labels round trip") {
  for (long k = -7; k <= 7; ++k) {
    const EventLabel l = label_of_event(k);
    CHECK(event_of_label(l.e, l.n) == k);
  }
  CHECK(label_of_event(1).e == 0);
  CHECK(label_of_event(1).n == 1);
  CHECK(label_of_event(0).e == 1);
  CHECK(label_of_event(0).n == 1);
}

TEST_CASE("closed-form monochromatic saddle matches an arbitrary-precision root") {
  const cplx t = mono_saddle_time(kMono, kIp, {0.3, 0.3}, 1, 1);
  CHECK(std::abs(t - cplx(30.672775496214847, 12.847488414276072)) < 1e-10);
  CHECK(std::abs(saddle_residual(kMono, kIp, {0.3, 0.3}, t)) < 1e-12);
}

TEST_CASE("monochromatic saddle set: two roots per cycle, all with Im t > 0") {
  const SaddleSet s = mono_saddle_times({0.1, 0.4}, kMono, kIp, 0, 3);
  CHECK(s.entries.size() == 8);
  for (const auto& e : s.entries) {
    CHECK(e.t_ion.imag() > 0.0);
    CHECK(e.residual < 1e-10);
  }
  CHECK(std::is_sorted(s.entries.begin(), s.entries.end(),
                       [](const SaddleTime& a, const SaddleTime& b) { return a.t_ion.real() < b.t_ion.real(); }));
  // single branch
  CHECK(mono_saddle_times({0.1, 0.4}, kMono, kIp, 0, 3, false).entries.size() == 4);
  CHECK_THROWS(mono_saddle_times({0.1, 0.4}, kPulse2, kIp, 0, 3));
}

TEST_CASE("closed form agrees with a blind root search") {
  const Momentum p{0.3, 0.3};
  const auto roots = blind_root_scan(p, kMono, kIp, {0.0, kMono.period(), 1e-3, 60.0}, 400);
  REQUIRE(roots.size() == 2);
  const SaddleSet s = mono_saddle_times(p, kMono, kIp, 1, 1);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(roots[i] - s.entries[i].t_ion) < 1e-8);
}

TEST_CASE("pulse saddles: Newton converges and nothing is missed") {
  const Momentum p{0.002, 0.1};
  std::vector<long> events;
  for (long k = -7; k <= 7; ++k) events.push_back(k);  // zeros are T/2 apart; tau = 2 T
  const SaddleSet s = pulse_saddle_times(p, kPulse2, kIp, events);
  CHECK(s.n_failed == 0);
  std::vector<cplx> known;
  for (const auto& e : s.entries) {
    CHECK(e.residual < 1e-10);
    known.push_back(e.t_ion);
  }
  // Independent search: 64 quasi-random seeds per cycle over (-tau, tau).
  const double T = kPulse2.period();
  const ComplexRegion region{-kPulse2.tau, kPulse2.tau, 1e-6, 40.0};
  const auto found = blind_root_scan(p, kPulse2, kIp, region, static_cast<int>(64 * 2 * kPulse2.tau / T));
  CHECK(!found.empty());
  CHECK(unmatched_roots(found, known, 1e-7).empty());
}

TEST_CASE("pulse saddles: Im t grows away from the envelope peak") {
  const Momentum p{0.0, 0.05};
  std::vector<long> events;
  for (long k = 0; k <= 8; ++k) events.push_back(k);
  const SaddleSet s = pulse_saddle_times(p, kPulse2, kIp, events);
  REQUIRE(s.entries.size() == events.size());
  // same branch: events k and k + 2
  for (std::size_t i = 2; i < s.entries.size(); ++i) {
    if (vector_potential_zero(kPulse2, s.entries[i - 2].event) < 0.0) continue;
    CHECK(s.entries[i].t_ion.imag() > s.entries[i - 2].t_ion.imag());
  }
}

TEST_CASE("far-from-peak events keep distinct saddles") {
  std::vector<long> events;
  for (long k = 0; k <= 10; ++k) events.push_back(k);
  const SaddleSet s = pulse_saddle_times({0.0, 0.197}, kPulse2, kIp, events);
  CHECK(s.n_failed == 0);
  for (std::size_t i = 1; i < s.entries.size(); ++i)
    CHECK(std::abs(s.entries[i].t_ion - s.entries[i - 1].t_ion) > 1.0);
}

TEST_CASE("action: value and U_p derivative against arbitrary-precision quadrature") {
  const Momentum p{0.3, 0.3};
  const cplx t = mono_saddle_time(kMono, kIp, p, 1, 1);
  const ActionBundle b = action_bundle(p, t, kMono, kIp, -0.5 * kMono.period());
  CHECK(std::abs(b.S - cplx(66.545828064766557, 4.837845539170012)) < 1e-10);
  CHECK(std::abs(b.dS_dUp - cplx(88.838327725693168, -5.1117416926959248)) < 1e-9);
}

TEST_CASE("action: S'' and dS/dU_p by finite differences") {
  const Momentum p{-0.4, 0.2};
  const double t_ref = -3.0 * kPulse2.tau;
  const cplx t(40.0, 14.0);
  const ActionBundle b = action_bundle(p, t, kPulse2, kIp, t_ref);
  const double h = 1e-2;
  auto S = [&](cplx s) { return action_bundle(p, s, kPulse2, kIp, t_ref).S; };
  const cplx sdd = (S(t + h) - 2.0 * S(t) + S(t - h)) / (h * h);
  CHECK(std::abs(sdd - b.S_dd) < 1e-6 * std::abs(b.S_dd));
  const cplx fd = fd_derivative([&](double g) { return action_bundle(p, t, kPulse2.with_up(g), kIp, t_ref).S; },
                                kPulse2.up, 1e-4);
  CHECK(std::abs(fd - b.dS_dUp) < 1e-7 * std::abs(b.dS_dUp));
}

TEST_CASE("phase differences do not depend on the reference time") {
  const Momentum p{0.2, 0.5};
  const cplx t1(-30.0, 13.0), t2(85.0, 15.0);
  auto diff = [&](double t_ref) {
    const ActionFrame f(kPulse2, kIp, t_ref);
    return f(p, t2).S - f(p, t1).S;
  };
  CHECK(std::abs(diff(-3.0 * kPulse2.tau) - diff(-123.4)) < 1e-12 * std::abs(diff(-123.4)) + 1e-12);
}

TEST_CASE("grid continuation reproduces pointwise solves") {
  Eigen::ArrayXd par = Eigen::ArrayXd::LinSpaced(21, -1.0, 1.0);
  Eigen::ArrayXd perp = Eigen::ArrayXd::LinSpaced(9, 0.02, 0.8);
  for (long k : {-1L, 0L, 2L}) {
    const SaddleGrid g = solve_saddle_grid(kPulse2, kIp, par, perp, k);
    CHECK(g.n_failed == 0);
    CHECK(g.max_residual < 1e-10);
    for (Eigen::Index i = 0; i < par.size(); i += 5)
      for (Eigen::Index j = 0; j < perp.size(); j += 4) {
        const SaddleTime s = refine_saddle(kPulse2, kIp, {par(i), perp(j)}, pulse_seed(kPulse2, kIp, {par(i), perp(j)}, k));
        CHECK(std::abs(s.t_ion - g.t(i, j)) < 1e-8);
      }
  }
}

TEST_CASE("channel selection") {
  ChannelSelection sel;
  sel.n_channels = 3;
  sel.t_start = 0.0;
  auto ev = select_events(kMono, sel);
  REQUIRE(ev.size() == 3);
  CHECK(ev[1] - ev[0] == 2);
  sel.intra_pairs = true;
  ev = select_events(kMono, sel);
  CHECK(ev.size() == 6);
  CHECK(ev[1] - ev[0] == 1);

  ChannelSelection peak;
  peak.anchor = ChannelSelection::Anchor::Peak;
  const LaserField f = LaserField::gaussian_cycles(0.44, 0.057, 5, 0.5 * kPi);
  ev = select_events(f, peak);
  REQUIRE(ev.size() == 1);
  CHECK(std::abs(vector_potential_zero(f, ev[0])) < 1e-9);

  ChannelSelection all;
  all.anchor = ChannelSelection::Anchor::All;
  all.span_tau = 1.0;
  ev = select_events(f, all);
  for (long k : ev) CHECK(std::abs(vector_potential_zero(f, k)) <= f.tau + 1e-9);
  CHECK(ev.size() == 21);  // CEP pi/2 puts a zero at t = 0
  CHECK_THROWS(select_events(kMono, all));
  sel.n_channels = 0;
  CHECK_THROWS(select_events(kMono, sel));
}
