#pragma once

#include <complex>

namespace sfqfi {

using cplx = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z), valid on the whole complex
/// plane. Upper half-plane evaluation uses Weideman's rational expansion
/// (40 terms, relative accuracy around 1e-13); the lower half-plane follows
/// from the reflection w(z) = 2 exp(-z^2) - w(-z).
cplx faddeeva_w(cplx z);

/// Antiderivative of exp(-beta s^2 + i k s) evaluated at (complex) t:
///
///   G(t) = sqrt(pi / (4 beta)) exp(-k^2 / (4 beta)) erf(sqrt(beta) t - i k / (2 sqrt(beta)))
///
/// The exp(-k^2/4beta) damping and the erf growth are combined through w(z)
/// so that the result stays finite for long pulses (k^2/4beta of several
/// thousand). Requires beta > 0.
cplx gaussian_phase_antiderivative(cplx t, double beta, double k);

/// erf(z) for complex z, assembled from faddeeva_w.
cplx erf(cplx z);

}  // namespace sfqfi
