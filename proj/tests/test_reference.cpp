#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sfqfi/amplitude.hpp"
#include "sfqfi/reference.hpp"

using namespace sfqfi;

namespace {
constexpr double kIp = 0.5;
}

TEST_CASE("finite differences") {
  CHECK(fd_derivative([](double g) { return g * g; }, 3.0, 1e-3) == doctest::Approx(6.0).epsilon(1e-12));
  const cplx d = fd_derivative([](double g) { return std::exp(cplx(0.0, g)); }, 0.5, 1e-3);
  CHECK(std::abs(d - cplx(0.0, 1.0) * std::exp(cplx(0.0, 0.5))) < 1e-11);
  CHECK_THROWS_AS(fd_derivative([](double g) { return g; }, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fd_derivative([](double g) { return std::log(g); }, 0.0, 1e-3), std::domain_error);
}

TEST_CASE("quadrature oracle: trivial cases") {
  const LaserField weak = LaserField::gaussian_cycles(1e-24, 0.057, 3, 0.0);
  // no field: the window and both free tails cancel exactly
  const QuadratureResult q = amplitude_by_quadrature({0.3, 0.2}, weak, kIp, -weak.tau, weak.tau, 0.0);
  CHECK(std::abs(q.value) < 1e-8);
  const QuadratureResult e = amplitude_by_quadrature({0.3, 0.2}, weak, kIp, 1.0, 1.0, 0.0);
  CHECK(e.value == cplx(0.0));
  QuadratureOptions strict;
  strict.max_doublings = 0;
  strict.tolerance = 1e-30;
  const LaserField f = LaserField::gaussian_cycles(0.44, 0.057, 3, 0.0);
  CHECK_THROWS_AS(amplitude_by_quadrature({0.3, 0.2}, f, kIp, -3 * f.tau, 3 * f.tau, -3 * f.tau, strict),
                  std::runtime_error);
}

TEST_CASE("quadrature oracle agrees with the saddle sum near the spectral peak") {
  const LaserField f = LaserField::gaussian_cycles(0.44, 0.057, 3, 0.5 * std::numbers::pi);
  const double t_ref = -3.0 * f.tau;
  ChannelSelection all;
  all.anchor = ChannelSelection::Anchor::All;
  const std::vector<long> events = select_events(f, all);
  for (Momentum p : {Momentum{0.2, 0.3}, Momentum{-0.5, 0.2}}) {
    const QuadratureResult q = amplitude_by_quadrature(p, f, kIp, -3.0 * f.tau, 3.0 * f.tau, t_ref);
    CHECK(q.error < 1e-6);
    const cplx sp = transition_amplitude(p, pulse_saddle_times(p, f, kIp, events), f, kIp, t_ref);
    CHECK(std::norm(sp) == doctest::Approx(std::norm(q.value)).epsilon(0.2));
  }
}

TEST_CASE("root bookkeeping") {
  const std::vector<cplx> known{{1.0, 2.0}, {5.0, 1.0}};
  const auto extra = unmatched_roots({{1.0, 2.0 + 1e-9}, {3.0, 1.0}}, known, 1e-6);
  REQUIRE(extra.size() == 1);
  CHECK(extra[0] == cplx(3.0, 1.0));
  const ComplexRegion r{0.0, 1.0, 0.0, 1.0};
  CHECK(r.contains({0.5, 0.5}));
  CHECK(!r.contains({0.5, 1.5}));
  CHECK(ComplexRegion{1.0, 1.0, 0.0, 1.0}.empty());
  const LaserField mono = LaserField::monochromatic(0.44, 0.057);
  CHECK(blind_root_scan({0.1, 0.1}, mono, kIp, {0, 1, 0, 0}, 50).empty());
}
