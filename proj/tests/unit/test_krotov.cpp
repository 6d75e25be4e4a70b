#include <doctest.h>

#include <cmath>

#include "geoctl/krotov.hpp"
#include "geoctl/problem.hpp"
#include "support/gen.hpp"

using namespace geoctl;

namespace {

std::vector<CVector> basis_states(int dim) {
  std::vector<CVector> out;
  for (int i = 0; i < dim; ++i) out.push_back(CVector::Unit(dim, i));
  return out;
}

}  // namespace

TEST_CASE("terminal functional") {
  const auto e = basis_states(2);
  CHECK(jt_functional(e, e) == doctest::Approx(0.0));
  CHECK(jt_functional({e[0], e[1]}, {e[1], e[0]}) == doctest::Approx(1.0));
  // overlaps 1 and -1 cancel in the sum
  CHECK(jt_functional({e[0], CVector(-e[1])}, {e[0], e[1]}) == doctest::Approx(1.0));
  // a common phase is invisible
  CHECK(jt_functional({CVector(kI * e[0]), CVector(kI * e[1])}, e) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("sine-squared envelope") {
  CHECK(sine_squared_envelope(0.0, 1.0) == 0.0);
  CHECK(sine_squared_envelope(0.5, 1.0) == doctest::Approx(1.0));
  CHECK(std::abs(sine_squared_envelope(1.0, 1.0)) < 1e-30);
}

TEST_CASE("fields already optimal are left alone") {
  const Problem p = Problem::single_qubit_dephasing();
  const AlgebraBasis b = p.basis();
  gen::Gen g(41);
  const ControlField f = g.smooth_field(1.0, 200, 3);
  const CMatrix u = propagate_fields(f, p.drift(b), b).back();
  GateTarget t;
  t.system = u;
  t.embedded = u;
  t.tau = 1.0;
  KrotovConfig cfg;
  cfg.initial = f;
  const KrotovResult r = krotov_optimize(t, p.drift(b), b, cfg, 1.0, 200);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK((r.field.values - f.values).norm() == 0.0);
}

TEST_CASE("monotone convergence for a Hadamard") {
  const Problem p = Problem::single_qubit_dephasing();
  const AlgebraBasis b = p.basis();
  const GateTarget t = p.target(named_gate("H"));
  KrotovConfig cfg;
  cfg.max_iters = 400;
  const KrotovResult r = krotov_optimize(t, p.drift(b), b, cfg, 1.0, 400);
  REQUIRE(r.jt_history.size() >= 2);
  for (std::size_t k = 1; k < r.jt_history.size(); ++k) CHECK(r.jt_history[k] <= r.jt_history[k - 1] + 1e-12);
  CHECK(r.converged);
  CHECK(r.final_jt < 1e-7);
  CHECK(fidelity(r.final_unitary, t) >= 1.0 - r.final_jt - 1e-8);
  // the envelope pins both ends of the update to the starting field
  const ControlField start = trivial_field(t, b, 1.0, 400);
  CHECK((r.field.values.row(0) - start.values.row(0)).norm() < 1e-12);
}

TEST_CASE("trivial field") {
  const Problem p = Problem::single_qubit_dephasing();
  const AlgebraBasis b = p.basis();
  const GateTarget t = p.target(named_gate("H"));
  const ControlField f = trivial_field(t, b, 1.0, 10);
  CHECK(f.components() == 3);
  for (int k = 0; k <= 10; ++k) CHECK((f.values.row(k).transpose() - t.c_target.head(3)).norm() == 0.0);
}
