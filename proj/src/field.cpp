#include "sfqfi/field.hpp"

#include <limits>
#include <string>

namespace sfqfi {

double LaserField::end_time() const {
  if (!is_gaussian()) return std::numeric_limits<double>::infinity();
  return 3.0 * tau;
}

void validate(const LaserField& field) {
  if (!(field.up > 0.0)) throw std::domain_error("field: up must be positive");
  if (!(field.omega > 0.0)) throw std::domain_error("field: omega must be positive");
  if (field.is_gaussian() && !(field.tau > 0.0))
    throw std::domain_error("field: gaussian envelope needs tau > 0");
}

double omega_from_wavelength(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw std::domain_error("wavelength must be positive");
  const double lambda_au = wavelength_nm / kBohrRadiusNm;
  return 2.0 * std::numbers::pi * kSpeedOfLight / lambda_au;
}

double up_from_intensity(double intensity_wcm2, double wavelength_nm) {
  if (intensity_wcm2 < 0.0) throw std::domain_error("intensity must be non-negative");
  const double omega = omega_from_wavelength(wavelength_nm);
  const double eps0 = 1.0 / (4.0 * std::numbers::pi);
  const double intensity = intensity_wcm2 / kAtomicIntensityWcm2;
  return intensity / (2.0 * kSpeedOfLight * eps0 * omega * omega);
}

double intensity_from_up(double up, double wavelength_nm) {
  return up / up_from_intensity(1.0, wavelength_nm);
}

cplx antiderivative_A(const LaserField& f, cplx t) {
  const double a = f.amplitude();
  if (!f.is_gaussian()) return a * std::sin(f.omega * t + f.cep) / f.omega;
  const cplx eip = std::polar(1.0, f.cep);
  const double b = f.beta();
  return 0.5 * a *
         (eip * gaussian_phase_antiderivative(t, b, f.omega) +
          std::conj(eip) * gaussian_phase_antiderivative(t, b, -f.omega));
}

cplx antiderivative_A2(const LaserField& f, cplx t) {
  const double a2 = f.amplitude() * f.amplitude();
  if (!f.is_gaussian())
    return a2 * (0.5 * t + std::sin(2.0 * (f.omega * t + f.cep)) / (4.0 * f.omega));
  const cplx e2ip = std::polar(1.0, 2.0 * f.cep);
  const double b2 = 2.0 * f.beta();
  return 0.5 * a2 *
         (gaussian_phase_antiderivative(t, b2, 0.0) +
          0.5 * (e2ip * gaussian_phase_antiderivative(t, b2, 2.0 * f.omega) +
                 std::conj(e2ip) * gaussian_phase_antiderivative(t, b2, -2.0 * f.omega)));
}

double int_A2_total(const LaserField& f) {
  if (!f.is_gaussian()) throw std::domain_error("int_A2_total: infinite for a monochromatic field");
  const double b2 = 2.0 * f.beta();
  const double a2 = f.amplitude() * f.amplitude();
  const double damping = std::exp(-f.omega * f.omega / b2);
  return 0.5 * a2 * std::sqrt(std::numbers::pi / b2) * (1.0 + std::cos(2.0 * f.cep) * damping);
}

double vector_potential_zero(const LaserField& f, long k) {
  return (0.5 * std::numbers::pi + static_cast<double>(k) * std::numbers::pi - f.cep) / f.omega;
}

double next_vector_potential_zero(const LaserField& f, double t) {
  const double x = (f.omega * t + f.cep - 0.5 * std::numbers::pi) / std::numbers::pi;
  long k = static_cast<long>(std::ceil(x - 1e-12));
  return vector_potential_zero(f, k);
}

}  // namespace sfqfi
