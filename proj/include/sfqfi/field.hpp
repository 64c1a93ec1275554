#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "sfqfi/faddeeva.hpp"

namespace sfqfi {

// Atomic-unit constants.
inline constexpr double kSpeedOfLight = 137.035999084;
inline constexpr double kBohrRadiusNm = 0.0529177210903;
/// W/cm^2 per atomic unit of intensity. With this value U_p = I/(2 c eps0 w^2)
/// gives 0.44 a.u. at 2e14 W/cm^2 and 800 nm.
inline constexpr double kAtomicIntensityWcm2 = 6.4364e15;

enum class Envelope { Monochromatic, Gaussian };

/// Linearly polarised driving field
///
///   A(t) = 2 sqrt(U_p) F(t) cos(w t + phi),   F(t) = exp(-2 ln2 t^2 / tau^2)
///
/// with F = 1 for the monochromatic case. tau is the FWHM of the intensity
/// envelope F^2 and is ignored for monochromatic fields. All quantities are
/// in atomic units.
struct LaserField {
  double up = 0.44;
  double omega = 0.057;
  double cep = 0.0;
  Envelope envelope = Envelope::Monochromatic;
  double tau = 0.0;

  static LaserField monochromatic(double up, double omega, double cep = 0.0) {
    return {up, omega, cep, Envelope::Monochromatic, 0.0};
  }
  static LaserField gaussian(double up, double omega, double tau, double cep) {
    return {up, omega, cep, Envelope::Gaussian, tau};
  }
  static LaserField gaussian_cycles(double up, double omega, double cycles, double cep) {
    return gaussian(up, omega, cycles * 2.0 * std::numbers::pi / omega, cep);
  }

  bool is_gaussian() const { return envelope == Envelope::Gaussian; }
  double amplitude() const { return 2.0 * std::sqrt(up); }
  double period() const { return 2.0 * std::numbers::pi / omega; }
  /// Exponent coefficient of F: F(t) = exp(-beta t^2).
  double beta() const { return 2.0 * std::numbers::ln2 / (tau * tau); }
  /// Time after which the field is treated as switched off (+3 tau); the
  /// monochromatic field never ends, so this returns +infinity there.
  double end_time() const;
  /// Same field with a different ponderomotive energy (everything else fixed).
  LaserField with_up(double new_up) const {
    LaserField f = *this;
    f.up = new_up;
    return f;
  }
  LaserField with_cep(double phi) const {
    LaserField f = *this;
    f.cep = phi;
    return f;
  }
};

/// Throws std::domain_error unless up > 0, omega > 0 and (for Gaussian) tau > 0.
void validate(const LaserField& field);

double omega_from_wavelength(double wavelength_nm);
/// U_p (a.u.) from peak intensity (W/cm^2) and wavelength (nm).
double up_from_intensity(double intensity_wcm2, double wavelength_nm);
double intensity_from_up(double up, double wavelength_nm);

template <typename Scalar>
Scalar envelope(const LaserField& f, Scalar t) {
  if (!f.is_gaussian()) return Scalar(1.0);
  using std::exp;
  return exp(-f.beta() * t * t);
}

template <typename Scalar>
Scalar vector_potential(const LaserField& f, Scalar t) {
  using std::cos;
  return f.amplitude() * envelope(f, t) * cos(f.omega * t + f.cep);
}

/// dA/dt; the electric field is its negative.
template <typename Scalar>
Scalar vector_potential_rate(const LaserField& f, Scalar t) {
  using std::cos;
  using std::sin;
  const Scalar phase = f.omega * t + f.cep;
  const Scalar F = envelope(f, t);
  Scalar rate = -f.omega * F * sin(phase);
  if (f.is_gaussian()) rate += -2.0 * f.beta() * t * F * cos(phase);
  return f.amplitude() * rate;
}

template <typename Scalar>
Scalar electric_field(const LaserField& f, Scalar t) {
  return -vector_potential_rate(f, t);
}

/// Antiderivatives of A and A^2 (arbitrary but fixed constant); analytic in t.
cplx antiderivative_A(const LaserField& f, cplx t);
cplx antiderivative_A2(const LaserField& f, cplx t);

/// Definite integrals of A and A^2 between (possibly complex) endpoints.
inline cplx int_A(const LaserField& f, cplx t0, cplx t1) {
  return antiderivative_A(f, t1) - antiderivative_A(f, t0);
}
inline cplx int_A2(const LaserField& f, cplx t0, cplx t1) {
  return antiderivative_A2(f, t1) - antiderivative_A2(f, t0);
}
inline double int_A(const LaserField& f, double t0, double t1) {
  return t0 == t1 ? 0.0 : int_A(f, cplx{t0}, cplx{t1}).real();
}
inline double int_A2(const LaserField& f, double t0, double t1) {
  return t0 == t1 ? 0.0 : int_A2(f, cplx{t0}, cplx{t1}).real();
}

/// Integral of A^2 over the whole real line (Gaussian envelope only).
double int_A2_total(const LaserField& f);

/// The k-th zero of A(t): w t_k + phi = pi/2 + k pi. Exact for both envelopes.
double vector_potential_zero(const LaserField& f, long k);
/// Smallest zero of A at or after t.
double next_vector_potential_zero(const LaserField& f, double t);

}  // namespace sfqfi
