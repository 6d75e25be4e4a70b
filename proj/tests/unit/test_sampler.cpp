#include <doctest.h>

#include <cmath>

#include "geoctl/error.hpp"
#include "geoctl/sampler.hpp"
#include "support/gen.hpp"

using namespace geoctl;

namespace {

CMatrix eq38_gate() {
  CMatrix u(2, 2);
  u << cplx(0.519159, -0.100536), cplx(0.247726, 0.811787), cplx(-0.247726, 0.811787), cplx(0.519159, 0.100536);
  return u;
}

SampleBank small_bank(std::uint64_t seed = 5, int jobs = 1) {
  Problem p = Problem::single_qubit_dephasing();
  p.steps = 200;
  NormSchedule s{0.25, 1.0, 0.25, 20.0, 1.0, 1.0};
  return generate_bank(s, p, seed, jobs);
}

}  // namespace

TEST_CASE("schedule sizes") {
  CHECK(NormSchedule::coarse().total() == 257600);
  CHECK(NormSchedule::fine().total() == 72000);
  CHECK(NormSchedule::two_qubit().total() == 36000);
  CHECK(NormSchedule::coarse().shells() == 161);
  NormSchedule tenth = NormSchedule::fine();
  tenth.scale = 0.1;
  CHECK(tenth.total() == 7200);

  NormSchedule bad = NormSchedule::fine();
  bad.norm_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = NormSchedule::fine();
  bad.norm_min = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("sphere draws") {
  CHECK(sphere_draw(entry_seed(1, 0, 0), 6, 2.5).norm() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(entry_seed(1, 0, 1) != entry_seed(1, 1, 0));
  CHECK(sphere_draw(99, 15, 1.0) == sphere_draw(99, 15, 1.0));
}

TEST_CASE("bank generation") {
  const SampleBank a = small_bank(5, 1);
  CHECK(a.entries.size() == 5 + 10 + 15 + 20);
  CHECK(a.valid_count() == a.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const BankEntry& e = a.entries[i];
    CHECK(e.index == i);
    CHECK(e.lambda.norm() == doctest::Approx(e.norm).epsilon(1e-12));
    CHECK(e.c.size() == 6);
  }
  const SampleBank b = small_bank(5, 2);
  for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].c == b.entries[i].c);
  const SampleBank c = small_bank(6, 1);
  CHECK(a.entries[0].lambda != c.entries[0].lambda);
}

TEST_CASE("candidate selection") {
  SampleBank bank = small_bank();
  const RVector own = bank.entries[17].c;
  const auto near = nearest_candidates(bank, own, 3);
  REQUIRE(near.size() == 3);
  CHECK(near[0]->index == 17);
  for (std::size_t i = 1; i < near.size(); ++i)
    CHECK(target_distance(near[i - 1]->c, {own}) <= target_distance(near[i]->c, {own}));
  CHECK(nearest_candidates(bank, own, 10000).size() == bank.entries.size());

  const auto asc = ascending_norm_candidates(bank, own);
  REQUIRE(asc.size() == 4);
  for (std::size_t i = 1; i < asc.size(); ++i) CHECK(asc[i - 1]->norm < asc[i]->norm);
  CHECK(asc[2]->index == 17);  // shells hold 5, 10, 15, 20 entries

  // a shell with no representable entries is skipped
  for (auto& e : bank.entries)
    if (e.shell == 0) e.ok = false, e.c.resize(0);
  CHECK(ascending_norm_candidates(bank, own).size() == 3);

  SampleBank empty = bank;
  empty.entries.clear();
  CHECK_THROWS_AS(nearest_candidates(empty, own, 1), Error);
}

TEST_CASE("single-shell bank has one ascending candidate") {
  Problem p = Problem::single_qubit_dephasing();
  p.steps = 100;
  const SampleBank bank = generate_bank(NormSchedule{1.0, 1.0, 0.5, 10.0, 1.0, 1.0}, p, 1);
  CHECK(bank.entries.size() == 10);
  CHECK(ascending_norm_candidates(bank, RVector::Zero(6)).size() == 1);
}

TEST_CASE("refinement from an exact guess") {
  const Problem p = Problem::single_qubit_dephasing();
  const GeodesicShooter sh = p.shooter(400);
  const CoState lam{0.4, -0.2, 0.7, 0.3, -0.1, 0.2};
  const CMatrix u = sh.final_unitary(lam);
  GateTarget t;
  t.system = u;
  t.embedded = u;
  t.tau = 1.0;
  const RefineResult r = refine(lam, t, sh);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.solution.costate.coefficients == lam.coefficients);
}

TEST_CASE("refinement reaches the low-energy solution") {
  const Problem p = Problem::single_qubit_dephasing();
  const GateTarget t = p.target(eq38_gate());
  const CoState guess{-0.182905, -0.100427, 0.0575862, -0.0115872, 0.0537916, 0.112321};
  const GeodesicShooter sh = p.shooter(2000);
  const RefineResult r = refine(guess, t, sh);
  CHECK(r.solution.infidelity < 1e-8);
  CHECK(r.solution.infidelity <= r.start_infidelity);
  CHECK(r.solution.energy == doctest::Approx(6.63466).epsilon(0.01));
  CHECK(classify_trajectory(r.solution.fidelity).global());
}

TEST_CASE("refine methods parse") {
  CHECK(parse_refine_method("nelder-mead") == RefineMethod::NelderMead);
  CHECK(parse_refine_method("bfgs") == RefineMethod::Bfgs);
  CHECK(parse_refine_method("lm") == RefineMethod::LevenbergMarquardt);
  CHECK(parse_strategy("ascending") == Strategy::Ascending);
  CHECK_THROWS_AS(parse_strategy("random"), Error);
}
