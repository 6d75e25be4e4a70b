#include <doctest.h>

#include <cmath>

#include "geoctl/dephasing.hpp"
#include "geoctl/error.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace geoctl;

namespace {

// 40-digit evaluations of the Gamma-function form, eta = 0.35, wc = 2 pi / 10, theta = 1.
constexpr double kMuTau = 0.5594193413984111880;
constexpr double kMuHalf = 0.8568892686625404607;
constexpr double kDriftHalf = 0.5016485093238189031;
constexpr double kCurvature = 0.6328025930868540395;

CMatrix plus_state() {
  CMatrix r(2, 2);
  r << 0.5, 0.5, 0.5, 0.5;
  return r;
}

}  // namespace

TEST_CASE("decoherence factor") {
  const NoiseParams p;
  CHECK(mu(0.0, p) == 1.0);
  CHECK(mu(1.0, p) == doctest::Approx(kMuTau).epsilon(1e-12));
  CHECK(mu(0.5, p) == doctest::Approx(kMuHalf).epsilon(1e-12));
  CHECK(mu_curvature(p) == doctest::Approx(kCurvature).epsilon(1e-10));
  CHECK(std::exp(log_mu(0.7, p)) == doctest::Approx(mu(0.7, p)).epsilon(1e-14));
  double prev = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double m = mu(0.01 * k, p);
    CHECK(m < prev);
    CHECK(m > 0.0);
    prev = m;
  }
  CHECK_THROWS_AS(mu(-0.1, p), Error);
}

TEST_CASE("decoherence factor against quadrature") {
  gen::Gen g(21);
  for (int i = 0; i < 40; ++i) {
    NoiseParams p;
    p.eta = g.uniform(0.0, 0.6);
    p.omega_c = g.uniform(0.2, 2.0);
    p.theta = g.uniform(0.2, 3.0);
    const double t = g.uniform(0.01, 3.0);
    CHECK(mu(t, p) == doctest::Approx(oracle::mu(t, p)).epsilon(1e-9));
    CHECK(mu_dot(t, p) == doctest::Approx(oracle::mu_dot(t, p)).epsilon(1e-6));
  }
}

TEST_CASE("drift coefficient") {
  const NoiseParams p;
  CHECK(drift_coefficient(0.5, p) == doctest::Approx(kDriftHalf).epsilon(1e-12));
  CHECK(drift_coefficient(0.5, p) == doctest::Approx(oracle::drift_coefficient(0.5, p)).epsilon(1e-7));
  const double limit = std::sqrt(0.5 * kCurvature);
  CHECK(drift_coefficient(0.0, p) == doctest::Approx(limit).epsilon(1e-10));
  CHECK(drift_coefficient(1e-3, p) == doctest::Approx(limit).epsilon(1e-5));
  // no jump across the series threshold
  CHECK(drift_coefficient(0.99e-4, p) == doctest::Approx(drift_coefficient(1.01e-4, p)).epsilon(1e-7));

  NoiseParams quiet;
  quiet.eta = 0.0;
  for (double t : {0.0, 0.3, 1.0}) {
    CHECK(mu(t, quiet) == 1.0);
    CHECK(drift_coefficient(t, quiet) == 0.0);
  }
}

TEST_CASE("purification reproduces the dephasing channel") {
  const NoiseParams p;
  CHECK((purification_unitary(0.0, p) - CMatrix::Identity(4, 4)).norm() < 1e-15);
  CVector a(2);
  a << M_SQRT1_2, M_SQRT1_2;
  const CMatrix ra = a * a.adjoint();
  gen::Gen g(22);
  for (int i = 0; i < 100; ++i) {
    const double t = g.uniform(0.0, 3.0);
    const CMatrix rho = g.density(2);
    const CMatrix ud = purification_unitary(t, p);
    CHECK(unitarity_residual(ud) < 1e-12);
    const CMatrix full = ud.adjoint() * kron(rho, ra) * ud;
    CMatrix reduced = CMatrix::Zero(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) reduced(r, c) = full(2 * r, 2 * c) + full(2 * r + 1, 2 * c + 1);
    CHECK((reduced - analytic_dephasing(rho, t, p)).norm() < 1e-12);
  }
}

TEST_CASE("purification generator is the drift") {
  const NoiseParams p;
  const CMatrix zz = kron(pauli(3), pauli(3));
  for (double t : {0.1, 0.5, 0.9}) {
    const double h = 1e-5;
    const CMatrix du = (purification_unitary(t + h, p) - purification_unitary(t - h, p)) / (2 * h);
    // the qubit evolves under U_D^dagger, so i dU_D^dagger/dt U_D = f(t) zz
    const CMatrix gen = kI * du.adjoint() * purification_unitary(t, p);
    CHECK((gen - drift_coefficient(t, p) * zz).norm() < 1e-7);
  }
}

TEST_CASE("bath correlation") {
  const NoiseParams p;
  CHECK(bath_correlation(0.0, p).imag() == 0.0);
  const cplx c = bath_correlation(0.3, p);
  CHECK(c.real() == doctest::Approx(0.3001086765575692099).epsilon(1e-12));
  CHECK(c.imag() == doctest::Approx(-0.04857726353297629028).epsilon(1e-12));
  gen::Gen g(23);
  for (int i = 0; i < 20; ++i) {
    NoiseParams q;
    q.omega_c = g.uniform(0.3, 1.5);
    q.theta = g.uniform(0.3, 2.0);
    const double s = g.uniform(0.0, 4.0);
    const cplx want = oracle::bath_correlation(s, q);
    CHECK(std::abs(bath_correlation(s, q) - want) < 1e-8 * std::abs(want) + 1e-12);
  }
  NoiseParams cold;
  cold.theta = 1e-9;
  for (double s : {0.2, 1.0, 3.0})
    CHECK(bath_correlation(s, cold).imag() == doctest::Approx(oracle::zero_temperature_im_correlation(s, cold)));
  CHECK(std::abs(bath_correlation(10.0 / p.omega_c, p)) < std::abs(bath_correlation(0.0, p)) / 10.0);
}

TEST_CASE("analytic dephasing") {
  const NoiseParams p;
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK((analytic_dephasing(diag, 0.8, p) - diag).norm() == 0.0);
  CHECK(analytic_dephasing(plus_state(), 1.0, p)(0, 1).real() == doctest::Approx(kMuTau / 2).epsilon(1e-12));
  NoiseParams strong;
  strong.eta = 50.0;
  CHECK(std::abs(analytic_dephasing(plus_state(), 1.0, strong)(0, 1)) < 1e-12);
}

TEST_CASE("master equation without control") {
  const NoiseParams p;
  const MasterEquation me(std::nullopt, p, 2000);
  const auto plus = me.evolve(plus_state());
  double worst = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = k * me.dt();
    worst = std::max(worst, std::abs(plus.rho[static_cast<std::size_t>(k)](0, 1) - 0.5 * mu(t, p)));
  }
  CHECK(worst < 1e-3);
  CHECK(plus.max_trace_drift < 1e-8);
  CHECK(plus.max_hermiticity_residual < 1e-10);

  CMatrix ground = CMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  for (const auto& r : me.evolve(ground).rho) CHECK((r - ground).norm() < 1e-12);

  NoiseParams quiet;
  quiet.eta = 0.0;
  gen::Gen g(24);
  const ControlField f = g.smooth_field(1.0, 400, 3);
  const CMatrix rho0 = g.density(2);
  for (const auto& r : evolve_master_equation(f, rho0, quiet, 400).rho) CHECK((r - rho0).norm() < 1e-12);
}

TEST_CASE("master equation input validation") {
  const NoiseParams p;
  CHECK_THROWS_AS(validate_density_matrix(2.0 * plus_state()), Error);
  CHECK_THROWS_AS(MasterEquation(ControlField::zeros(1.0, 10, 2), p, 10), Error);
  NoiseParams bad;
  bad.omega_c = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
