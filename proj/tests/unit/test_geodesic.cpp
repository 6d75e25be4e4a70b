#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geoctl/error.hpp"
#include "geoctl/geodesic.hpp"
#include "geoctl/problem.hpp"
#include "support/gen.hpp"

using namespace geoctl;

namespace {

CMatrix eq38_gate() {
  CMatrix u(2, 2);
  u << cplx(0.519159, -0.100536), cplx(0.247726, 0.811787), cplx(-0.247726, 0.811787), cplx(0.519159, 0.100536);
  return u;
}

const CoState kBranchA{-7.98205, -1.11417, 0.169623, -5.05037, 19.5992, -8.80057};
const CoState kBranchB{4.58233, 0.0156099, 0.289273, 2.97867, -16.7162, 7.98673};
const CoState kGlobal{2.73839, 2.87388, -1.60211, -22.1932, 8.21078, -4.49642};

}  // namespace

TEST_CASE("zero co-state without drift stays at the identity") {
  const AlgebraBasis b = Problem::single_qubit_dephasing().basis();
  const GeodesicSolution s = integrate_geodesic(CoState(RVector::Zero(6)), DriftSpec::none(), b, 1.0, 200);
  CHECK((s.final_unitary - CMatrix::Identity(4, 4)).norm() < 1e-14);
  CHECK(s.energy == 0.0);
}

TEST_CASE("co-state inside the distribution gives constant controls") {
  const AlgebraBasis b = Problem::single_qubit_dephasing().basis();
  gen::Gen g(31);
  for (int i = 0; i < 10; ++i) {
    RVector c = RVector::Zero(6);
    c.head(3) = g.ball_vector(3, 0.5, 3.0);
    const GeodesicSolution s = integrate_geodesic(CoState(c), DriftSpec::none(), b, 1.0, 2000);
    CHECK((s.final_unitary - expm_hermitian(b.combine(c), 1.0)).norm() < 1e-10);
    for (int k = 0; k <= 2000; ++k) CHECK((s.field.values.row(k).transpose() - c.head(3)).norm() < 1e-10);
    CHECK(s.energy == doctest::Approx(0.5 * c.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("controls are the distribution part of the transported co-state") {
  const Problem p = Problem::single_qubit_dephasing();
  const GeodesicShooter sh = p.shooter(500);
  const CMatrix l0 = sh.basis().combine(kGlobal.coefficients);
  const auto us = sh.trajectory(kGlobal);
  const GeodesicSolution s = sh.solve(kGlobal);
  for (int k = 0; k <= 500; k += 25) {
    const CMatrix lk = us[static_cast<std::size_t>(k)] * l0 * us[static_cast<std::size_t>(k)].adjoint();
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(normalized_trace_product(lk, sh.basis().element(j)).real() - s.field.values(k, j)) < 1e-10);
    // conjugation preserves the co-state norm
    CHECK(sh.basis().coefficients(lk).norm() == doctest::Approx(kGlobal.norm()).epsilon(1e-8));
  }
}

TEST_CASE("fidelity") {
  const CMatrix u = eq38_gate();
  const CMatrix full = kron(u, pauli(0));
  CHECK(fidelity(full, full) == doctest::Approx(1.0));
  CHECK(fidelity(std::polar(1.0, 0.7) * full, full) == doctest::Approx(1.0));
  CHECK(fidelity(CMatrix::Identity(4, 4), kron(named_gate("H"), pauli(0))) < 1e-30);
  CHECK_THROWS_AS(fidelity(CMatrix::Identity(2, 2), full), Error);
}

TEST_CASE("energy functional") {
  RMatrix v = RMatrix::Zero(101, 3);
  v.col(0).setConstant(1.5);
  const ControlField f(2.0, v);
  CHECK(energy(f, RVector::Ones(3)).value == doctest::Approx(2.0 * 1.5 * 1.5 / 2));
  CHECK(energy(ControlField::zeros(1.0, 100, 3), RVector::Ones(3)).value == 0.0);
  // Simpson is exact on cubics: h = t^3 squared is degree 6, use h = t (h^2 = t^2)
  RMatrix lin(101, 1);
  for (int k = 0; k <= 100; ++k) lin(k, 0) = k / 100.0;
  CHECK(energy(ControlField(1.0, lin), RVector::Ones(1)).value == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  const EnergyResult odd = energy(ControlField(1.0, RMatrix::Ones(100, 1)), RVector::Ones(1));
  CHECK(odd.trapezoid_fallback);
  CHECK(odd.value == doctest::Approx(0.5));
  // metric weights each component
  RVector w(3);
  w << 2.0, 1.0, 1.0;
  CHECK(energy(f, w).value == doctest::Approx(2.0 * 2.0 * 1.5 * 1.5 / 2));
}

TEST_CASE("field propagation") {
  const Problem p = Problem::two_qubit_crosstalk();
  const AlgebraBasis b = p.basis();
  const auto us = propagate_fields(ControlField::zeros(1.0, 200, 6), p.drift(b), b);
  const CMatrix want = expm_hermitian(OperatorLabel("yy").matrix(), std::numbers::pi / 2);
  CHECK((us.back() - want).norm() < 1e-12);
  const auto idle = propagate_fields(ControlField::zeros(1.0, 50, 6), DriftSpec::none(), b);
  CHECK((idle.back() - CMatrix::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("field replay reproduces the geodesic") {
  const Problem p = Problem::single_qubit_dephasing();
  const AlgebraBasis b = p.basis();
  const GeodesicSolution s = p.shooter(4000).solve(kGlobal);
  const auto us = propagate_fields(s.field, p.drift(b), b);
  CHECK(fidelity(us.back(), s.final_unitary) > 1 - 1e-6);
}

TEST_CASE("branch co-states") {
  const Problem p = Problem::single_qubit_dephasing();
  const GeodesicShooter sh = p.shooter(2000);
  const GateTarget t = p.target(eq38_gate());

  const GeodesicSolution g = sh.solve(kGlobal, &t);
  CHECK(g.infidelity < 1e-8);
  CHECK(g.energy == doctest::Approx(6.63466).epsilon(0.01));
  CHECK(classify_trajectory(g.fidelity).str() == "GLOBAL_CANDIDATE");
  CHECK(g.max_unitarity_residual < 1e-8);

  // The A and B co-states land on the gate only for a slightly weaker bath.
  NoiseParams n;
  n.eta = 0.34;
  const Problem q = Problem::single_qubit_dephasing(n);
  const GeodesicShooter sq = q.shooter(2000);
  const GateTarget tq = q.target(eq38_gate());
  const GeodesicSolution a = sq.solve(kBranchA, &tq);
  const GeodesicSolution bb = sq.solve(kBranchB, &tq);
  CHECK(a.infidelity < 1e-8);
  CHECK(bb.infidelity < 1e-8);
  CHECK(a.energy == doctest::Approx(27.0986).epsilon(0.01));
  CHECK(bb.energy == doctest::Approx(14.5152).epsilon(0.01));
  CHECK(classify_trajectory(a.fidelity).str() == "OVERSHOOT(2)");
  CHECK(classify_trajectory(bb.fidelity).str() == "OVERSHOOT(1)");
}

TEST_CASE("trajectory classification") {
  std::vector<double> up(50);
  for (int k = 0; k < 50; ++k) up[static_cast<std::size_t>(k)] = k / 49.0;
  CHECK(classify_trajectory(up).global());

  std::vector<double> twice{0.0, 0.5, 0.98, 0.6, 0.2, 0.99, 0.4, 0.8, 1.0};
  const Classification c = classify_trajectory(twice);
  CHECK(c.overshoots == 2);
  CHECK(c.str() == "OVERSHOOT(2)");
  CHECK(Classification::parse(c.str()).overshoots == 2);
  CHECK(Classification::parse("GLOBAL_CANDIDATE").global());

  // a peak below 1 - epsilon does not count
  CHECK(classify_trajectory(std::vector<double>{0.0, 0.9, 0.5, 1.0}).global());
  CHECK_THROWS_AS(classify_trajectory(std::vector<double>{0.0, 0.5, 0.9}), Error);
}
