#include "sfqfi/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace sfqfi {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double L;
  std::array<double, kTerms> a;  // a[n] multiplies Z^n in the polynomial

  WeidemanTable() {
    const int M = 2 * kTerms;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    // a_n = (1/2M) sum_k f(t_k) cos(n theta_k), theta_k = k pi / M, k = -M+1..M-1,
    // with f(t) = (L^2 + t^2) exp(-t^2) and t_k = L tan(theta_k / 2).
    std::array<double, kTerms + 1> coef{};
    for (int n = 1; n <= kTerms; ++n) {
      double sum = 0.0;
      for (int k = -M + 1; k <= M - 1; ++k) {
        const double theta = k * std::numbers::pi / M;
        const double t = L * std::tan(0.5 * theta);
        sum += (L * L + t * t) * std::exp(-t * t) * std::cos(n * theta);
      }
      coef[n] = sum / (2.0 * M);
    }
    for (int n = 0; n < kTerms; ++n) a[n] = coef[n + 1];
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

cplx w_upper(cplx z) {
  const auto& tab = table();
  const cplx iz{-z.imag(), z.real()};
  const cplx denom = tab.L - iz;
  const cplx Z = (tab.L + iz) / denom;
  cplx p = tab.a[kTerms - 1];
  for (int n = kTerms - 2; n >= 0; --n) p = p * Z + tab.a[n];
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

}  // namespace

cplx faddeeva_w(cplx z) {
  if (z.imag() >= 0.0) return w_upper(z);
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

cplx gaussian_phase_antiderivative(cplx t, double beta, double k) {
  const double sb = std::sqrt(beta);
  const double c = k / (2.0 * sb);
  const cplx z = sb * t - cplx{0.0, c};
  const cplx carrier = std::exp(-beta * t * t + cplx{0.0, k} * t);
  const double damp = std::exp(-c * c);
  cplx val;
  // exp(-c^2) erf(z) = +-exp(-c^2) -+ exp(-beta t^2 + i k t) w(+-i z); the sign is
  // picked so that w is evaluated in the upper half-plane.
  if (z.real() >= 0.0) {
    val = damp - carrier * faddeeva_w(cplx{-z.imag(), z.real()});
  } else {
    val = -damp + carrier * faddeeva_w(cplx{z.imag(), -z.real()});
  }
  return std::sqrt(std::numbers::pi / (4.0 * beta)) * val;
}

cplx erf(cplx z) {
  // erf(z) = 1 - exp(-z^2) w(i z) for Re z >= 0, odd symmetry otherwise.
  if (z.real() < 0.0) return -erf(-z);
  const cplx iz{-z.imag(), z.real()};
  return 1.0 - std::exp(-z * z) * faddeeva_w(iz);
}

}  // namespace sfqfi
