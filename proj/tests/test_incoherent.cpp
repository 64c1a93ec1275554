#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sfqfi/fisher.hpp"
#include "sfqfi/incoherent.hpp"

using namespace sfqfi;

namespace {
const double kPi = std::numbers::pi;

OutcomeSample polynomial(double i) {
  OutcomeSample s{Eigen::ArrayXd(3), Eigen::ArrayXd(3)};
  s.prob << 0.5 + 0.1 * i, 0.2 * i * i, 0.05;
  s.dprob << 0.1, 0.4 * i, 0.0;
  return s;
}

// midpoint rule on [a, b] for an independent check of the shell rule
template <class F>
double midpoint(F f, double a, double b, int n) {
  double h = (b - a) / n, s = 0.0;
  for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
  return s * h;
}
}  // namespace

TEST_CASE("focal shell density against arbitrary-precision values") {
  FocalSpec spec;  // w0 = z0 = 1, |z| <= 2 z0
  CHECK(focal_shell_density(spec, 0.15) == doctest::Approx(97.73843811168246).epsilon(1e-12));
  CHECK(focal_shell_density(spec, 0.5) == doctest::Approx(8.377580409572782).epsilon(1e-12));
  CHECK(focal_shell_density(spec, 0.9) == doctest::Approx(1.206647384094845).epsilon(1e-12));
  CHECK(focal_shell_density(spec, 1.2) == 0.0);
  CHECK(focal_shell_density(spec, 0.0) == 0.0);
  // in units of w0^2 z0: only the z-range in units of z0 matters
  FocalSpec big = spec;
  big.w0 = 3.0;
  big.z0 = 2.0;
  CHECK(focal_shell_density(big, 0.5) == doctest::Approx(focal_shell_density(spec, 0.5)));
}

TEST_CASE("focal shell rule: normalised and consistent with the density") {
  for (bool literal : {false, true}) {
    FocalSpec spec;
    spec.literal = literal;
    spec.n_nodes = 24;
    const ShellRule r = focal_shell_weights(spec);
    CHECK(r.weight.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((r.weight > 0.0).all());
    CHECK(r.u.minCoeff() >= spec.min_fraction);
    CHECK(r.u.maxCoeff() <= 1.0);
    auto h = [&](double u) { return focal_shell_density(spec, u); };
    const double norm = midpoint(h, spec.min_fraction, 1.0, 400000);
    const double mean_u = midpoint([&](double u) { return u * h(u); }, spec.min_fraction, 1.0, 400000) / norm;
    CHECK((r.weight * r.u).sum() == doctest::Approx(mean_u).epsilon(1e-4));
  }
  FocalSpec bad;
  bad.w0 = 0.0;
  CHECK_THROWS(focal_shell_weights(bad));
  bad = FocalSpec{};
  bad.min_fraction = 1.0;
  CHECK_THROWS(focal_shell_weights(bad));
}

TEST_CASE("focal average and its derivative") {
  FocalSpec spec;
  const ShellRule r = focal_shell_weights(spec);
  const double i0 = 2.0;
  const OutcomeSample s = focal_average(polynomial, spec, i0);
  CHECK(s.prob(0) == doctest::Approx(0.5 + 0.1 * i0 * (r.weight * r.u).sum()));
  CHECK(s.prob(2) == doctest::Approx(0.05));
  const double h = 1e-4;
  const OutcomeSample hi = focal_average(polynomial, spec, i0 + h), lo = focal_average(polynomial, spec, i0 - h);
  for (int k = 0; k < 3; ++k) CHECK(s.dprob(k) == doctest::Approx((hi.prob(k) - lo.prob(k)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("intensity fluctuations") {
  const double i0 = 2.0;
  SUBCASE("vanishing width is the identity") {
    const OutcomeSample s = fluct_average(polynomial, {1e-7, 0.0, 21}, i0);
    const OutcomeSample p = polynomial(i0);
    for (int k = 0; k < 3; ++k) {
      CHECK(s.prob(k) == doctest::Approx(p.prob(k)).epsilon(1e-10));
      CHECK(s.dprob(k) == doctest::Approx(p.dprob(k)).epsilon(1e-6));
    }
  }
  SUBCASE("quadratic outcome: mean and derivative") {
    const double sigma = 0.1;
    const OutcomeSample s = fluct_average(polynomial, {sigma, 0.0, 24}, i0);
    CHECK(s.prob(1) == doctest::Approx(0.2 * (i0 * i0 + sigma * sigma)).epsilon(1e-6));
    CHECK(s.dprob(1) == doctest::Approx(0.4 * i0).epsilon(1e-6));
    CHECK(s.dprob(0) == doctest::Approx(0.1).epsilon(1e-6));
  }
  CHECK_THROWS(fluct_average(polynomial, {0.1, 0.3, 17}, i0));
}

TEST_CASE("CEP average") {
  auto sampler = [](double phi) {
    OutcomeSample s{Eigen::ArrayXd(2), Eigen::ArrayXd(2)};
    s.prob << std::cos(phi) * std::cos(phi), 1.0 + std::sin(3.0 * phi);
    s.dprob << std::sin(2.0 * phi), 1.0;
    return s;
  };
  const OutcomeSample s = cep_average(sampler, 8);
  CHECK(s.prob(0) == doctest::Approx(0.5));
  CHECK(s.prob(1) == doctest::Approx(1.0));
  CHECK(s.dprob(0) == doctest::Approx(0.0));
  CHECK(s.dprob(1) == doctest::Approx(1.0));
}

TEST_CASE("combined ensemble") {
  auto micro = [](double i, double phi) {
    OutcomeSample s = polynomial(i);
    s.prob(2) += 0.01 * std::cos(phi);
    return s;
  };
  const OutcomeSample plain = combined_distribution(micro, {}, 2.0, 0.0);
  CHECK(plain.prob(2) == doctest::Approx(0.06));
  CHECK(combined_cfi(micro, {}, 2.0) == doctest::Approx(classical_fisher(plain.prob, plain.dprob)));

  EnsembleSpec all;
  all.focal = FocalSpec{};
  all.cep_n_phi = 8;
  all.fluct = FluctSpec{0.05, 0.0, 17};
  const OutcomeSample mixed = combined_distribution(micro, all, 2.0);
  CHECK(mixed.prob(2) == doctest::Approx(0.05).epsilon(1e-12));
  // averaging over unresolved parameters loses information
  CHECK(combined_cfi(micro, all, 2.0) < combined_cfi(micro, {}, 2.0));
  (void)kPi;
}
