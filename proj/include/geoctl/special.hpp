#pragma once

#include <complex>

namespace geoctl::special {

/// log Gamma(z) for complex z away from the non-positive integers. The real
/// part is accurate to ~1e-14 relative; the imaginary part is a continuous
/// branch, not necessarily the principal one.
std::complex<double> log_gamma(std::complex<double> z);

/// |Gamma(z)| = exp(Re log Gamma(z)).
double abs_gamma(std::complex<double> z);

/// psi(z) = d/dz log Gamma(z).
std::complex<double> digamma(std::complex<double> z);

/// psi'(z).
std::complex<double> trigamma(std::complex<double> z);

}  // namespace geoctl::special
