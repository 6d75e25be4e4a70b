#pragma once

// Independent reference values by direct quadrature of the bath integrals.
// None of this shares code with the library's closed forms.

#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geoctl/dephasing.hpp"

namespace oracle {

inline double integrate(auto f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

inline double coth(double x) { return 1.0 / std::tanh(x); }

/// mu(t) = exp(-4 eta int_0^inf e^{-w/wc} coth(beta w/2) (1 - cos wt) / w dw).
inline double mu(double t, const geoctl::NoiseParams& p) {
  if (t == 0.0) return 1.0;
  const double beta = p.beta();
  const auto f = [&](double w) {
    const double s = std::sin(0.5 * w * t);
    return std::exp(-w / p.omega_c) * coth(0.5 * beta * w) * 2.0 * s * s / w;
  };
  return std::exp(-4.0 * p.eta * integrate(f, 0.0, 80.0 * p.omega_c));
}

/// Richardson-extrapolated central difference of the quadrature mu.
inline double mu_dot(double t, const geoctl::NoiseParams& p) {
  const auto d = [&](double h) { return (oracle::mu(t + h, p) - oracle::mu(t - h, p)) / (2.0 * h); };
  const double h = 1e-3;
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

inline double drift_coefficient(double t, const geoctl::NoiseParams& p) {
  const double m = oracle::mu(t, p);
  return -oracle::mu_dot(t, p) / (2.0 * std::sqrt(1.0 - m * m));
}

/// C(s) = int_0^inf J(w) [coth(beta w/2) cos(ws) - i sin(ws)] dw, J = eta w e^{-w/wc}.
inline std::complex<double> bath_correlation(double s, const geoctl::NoiseParams& p) {
  const double beta = p.beta();
  const auto re = [&](double w) {
    return w == 0.0 ? 2.0 * p.eta / beta : p.eta * w * std::exp(-w / p.omega_c) * coth(0.5 * beta * w) * std::cos(w * s);
  };
  const auto im = [&](double w) { return -p.eta * w * std::exp(-w / p.omega_c) * std::sin(w * s); };
  return {integrate(re, 0.0, 80.0 * p.omega_c), integrate(im, 0.0, 80.0 * p.omega_c)};
}

/// -eta int w e^{-w/wc} sin(ws) dw = -eta 2 wc^3 s / (1 + wc^2 s^2)^2.
inline double zero_temperature_im_correlation(double s, const geoctl::NoiseParams& p) {
  const double wc = p.omega_c;
  const double q = 1.0 + wc * wc * s * s;
  return -p.eta * 2.0 * wc * wc * wc * s / (q * q);
}

}  // namespace oracle
