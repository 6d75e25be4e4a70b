#include "geoctl/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "geoctl/error.hpp"

namespace geoctl::special {

namespace {

using cplx = std::complex<double>;

// Bernoulli numbers B_2 .. B_20.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,      1.0 / 42.0,  -1.0 / 30.0,      5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,        -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0,
};

// Below this real part the recurrence shifts z upward before the asymptotic
// series is used; at Re z >= 12 ten Bernoulli terms leave < 1e-17 error.
constexpr double kAsymptoticThreshold = 12.0;

void check_pole(cplx z) {
  if (z.real() <= 0.0 && std::abs(z.imag()) < 1e-14 && std::abs(z.real() - std::round(z.real())) < 1e-14) {
    fail(ErrorKind::Domain, "gamma-family function evaluated at a pole");
  }
}

cplx log_gamma_asymptotic(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k + 1);
    series += kBernoulli[k] / (n * (n - 1.0)) * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

cplx digamma_asymptotic(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv2;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k + 1);
    series += kBernoulli[k] / n * power;
    power *= inv2;
  }
  return std::log(z) - 0.5 * inv - series;
}

cplx trigamma_asymptotic(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv2 * inv;
  for (double b : kBernoulli) {
    series += b * power;
    power *= inv2;
  }
  return inv + 0.5 * inv2 + series;
}

}  // namespace

cplx log_gamma(cplx z) {
  check_pole(z);
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(std::numbers::pi) - std::log(std::sin(std::numbers::pi * z)) - log_gamma(1.0 - z);
  }
  cplx shift = 0.0;
  while (z.real() < kAsymptoticThreshold) {
    shift += std::log(z);
    z += 1.0;
  }
  return log_gamma_asymptotic(z) - shift;
}

double abs_gamma(cplx z) { return std::exp(log_gamma(z).real()); }

cplx digamma(cplx z) {
  check_pole(z);
  if (z.real() < 0.5) {
    return digamma(1.0 - z) - std::numbers::pi / std::tan(std::numbers::pi * z);
  }
  cplx shift = 0.0;
  while (z.real() < kAsymptoticThreshold) {
    shift += 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) - shift;
}

cplx trigamma(cplx z) {
  check_pole(z);
  if (z.real() < 0.5) {
    const cplx s = std::sin(std::numbers::pi * z);
    return std::numbers::pi * std::numbers::pi / (s * s) - trigamma(1.0 - z);
  }
  cplx shift = 0.0;
  while (z.real() < kAsymptoticThreshold) {
    shift += 1.0 / (z * z);
    z += 1.0;
  }
  return trigamma_asymptotic(z) + shift;
}

}  // namespace geoctl::special
