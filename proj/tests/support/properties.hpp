#pragma once

// Randomized property checks shared by the unit suite and the acceptance run.
// Each returns how many of `cases` generated instances violated the property.

#include <algorithm>
#include <cmath>
#include <string>

#include "gen.hpp"
#include "geoctl/geodesic.hpp"
#include "geoctl/lie.hpp"
#include "geoctl/problem.hpp"
#include "geoctl/sampler.hpp"

namespace props {

using namespace geoctl;

struct Outcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed error measure
  std::string first_failure;

  void record(bool ok, double err, const std::string& what) {
    ++cases;
    worst = std::max(worst, err);
    if (!ok && failures++ == 0) first_failure = what;
  }
};

inline const AlgebraBasis& single_qubit_basis() {
  static const AlgebraBasis b = Problem::single_qubit_dephasing().basis();
  return b;
}

inline const AlgebraBasis& two_qubit_basis() {
  static const AlgebraBasis b = Problem::two_qubit_crosstalk().basis();
  return b;
}

inline CMatrix random_algebra_element(gen::Gen& g, const AlgebraBasis& b) {
  return b.combine(g.normal_vector(b.size()));
}

/// P[P[X]] = P[X] and ntr(P[X] Y) = ntr(X P[Y]).
inline Outcome projection(std::uint64_t seed, int cases) {
  Outcome o{"projection idempotence and self-adjointness"};
  gen::Gen g(seed);
  for (int i = 0; i < cases; ++i) {
    const AlgebraBasis& b = i % 2 ? two_qubit_basis() : single_qubit_basis();
    const CMatrix x = random_algebra_element(g, b);
    const CMatrix y = random_algebra_element(g, b);
    const CMatrix px = project_distribution(x, b);
    const double idem = (project_distribution(px, b) - px).norm();
    const double adj = std::abs(normalized_trace_product(px, y) - normalized_trace_product(x, project_distribution(y, b)));
    const double err = std::max(idem, adj);
    o.record(err < 1e-12, err, "case " + std::to_string(i));
  }
  return o;
}

/// extract(exp(-i tau sum c_j alpha_j)) = c for ||tau H||_op < pi.
inline Outcome exp_log_round_trip(std::uint64_t seed, int cases) {
  Outcome o{"exp/log round trip on the principal branch"};
  gen::Gen g(seed);
  for (int i = 0; i < cases; ++i) {
    const AlgebraBasis& b = i % 2 ? two_qubit_basis() : single_qubit_basis();
    const double tau = g.uniform(0.2, 3.0);
    RVector c = g.normal_vector(b.size());
    const CMatrix h = b.combine(c);
    const double op = Eigen::SelfAdjointEigenSolver<CMatrix>(h).eigenvalues().cwiseAbs().maxCoeff();
    c *= g.uniform(0.01, 0.99) * M_PI / (tau * op);
    const RVector back = extract_coefficients(expm_hermitian(b.combine(c), tau), tau, b);
    const double err = (back - c).cwiseAbs().maxCoeff();
    o.record(err < 1e-9, err, "case " + std::to_string(i));
  }
  return o;
}

/// ||U^dagger U - I||_F < 1e-8 at every grid point.
inline Outcome unitarity(std::uint64_t seed, int cases) {
  Outcome o{"unitarity along trajectories"};
  gen::Gen g(seed);
  const Problem p1 = Problem::single_qubit_dephasing();
  const Problem p2 = Problem::two_qubit_crosstalk();
  const GeodesicShooter s1 = p1.shooter(400);
  const GeodesicShooter s2 = p2.shooter(400);
  for (int i = 0; i < cases; ++i) {
    const GeodesicShooter& s = i % 2 ? s2 : s1;
    const CoState lam(g.ball_vector(s.basis().size(), 0.25, 12.0));
    double err = 0.0;
    for (const auto& u : s.trajectory(lam)) err = std::max(err, unitarity_residual(u));
    o.record(err < 1e-8, err, "norm " + std::to_string(lam.norm()));
  }
  return o;
}

struct CostateCheck {
  double error = 0.0;
  double scale = 0.0;
};

/// Central-difference i dLambda/dt against [H, Lambda] at interior grid points.
inline CostateCheck costate_equation_error(const Problem& p, const CoState& lam, int steps) {
  const AlgebraBasis b = p.basis();
  const DriftSpec drift = p.drift(b);
  const GeodesicShooter s(b, drift, p.tau, steps);
  const auto us = s.trajectory(lam);
  const CMatrix l0 = b.combine(lam.coefficients);
  const double dt = p.tau / steps;
  const auto big = [&](int k) { return CMatrix(us[static_cast<std::size_t>(k)] * l0 * us[static_cast<std::size_t>(k)].adjoint()); };
  CostateCheck out;
  for (int k : {steps / 4, steps / 2, 3 * steps / 4}) {
    const CMatrix lk = big(k);
    const CMatrix h = drift.hamiltonian(k * dt, b) + project_distribution(lk, b);
    const CMatrix lhs = kI * (big(k + 1) - big(k - 1)) / (2.0 * dt);
    const CMatrix rhs = h * lk - lk * h;
    out.error = std::max(out.error, (lhs - rhs).norm());
    out.scale = std::max(out.scale, rhs.norm());
  }
  return out;
}

/// The co-state equation i dLambda/dt = [H, Lambda], second order in dt.
inline Outcome costate_equation(std::uint64_t seed, int cases) {
  Outcome o{"co-state equation by finite differences"};
  gen::Gen g(seed);
  const Problem p1 = Problem::single_qubit_dephasing();
  const Problem p2 = Problem::two_qubit_crosstalk();
  for (int i = 0; i < cases; ++i) {
    const Problem& p = i % 2 ? p2 : p1;
    const CoState lam(g.ball_vector(p.basis().size(), 0.25, 6.0));
    const CostateCheck coarse = costate_equation_error(p, lam, 500);
    const CostateCheck fine = costate_equation_error(p, lam, 1000);
    const double rel = fine.error / std::max(fine.scale, 1e-12);
    // second order: halving dt cuts the error ~4x (allow 3x); tiny errors are rounding
    const bool ok = rel < 1e-4 && (fine.error < 1e-9 || coarse.error / fine.error > 3.0);
    o.record(ok, rel, "norm " + std::to_string(lam.norm()));
  }
  return o;
}

/// Geodesic energy changes by < 1e-6 relative when N doubles from 2000 to 4000.
inline Outcome energy_convergence(std::uint64_t seed, int cases) {
  Outcome o{"energy grid convergence"};
  gen::Gen g(seed);
  const Problem p1 = Problem::single_qubit_dephasing();
  const Problem p2 = Problem::two_qubit_crosstalk();
  const GeodesicShooter a1 = p1.shooter(2000), b1 = p1.shooter(4000);
  const GeodesicShooter a2 = p2.shooter(2000), b2 = p2.shooter(4000);
  for (int i = 0; i < cases; ++i) {
    const bool two = i % 2;
    const CoState lam(g.ball_vector(two ? 15 : 6, 0.25, 12.0));
    const double e1 = (two ? a2 : a1).solve(lam).energy;
    const double e2 = (two ? b2 : b1).solve(lam).energy;
    const double rel = std::abs(e1 - e2) / std::max(e2, 1e-12);
    o.record(rel < 1e-6, rel, "norm " + std::to_string(lam.norm()));
  }
  return o;
}

/// Same seed gives bit-identical entries regardless of thread count;
/// every entry lies on its shell.
inline Outcome bank_determinism(std::uint64_t seed, int cases) {
  Outcome o{"bank determinism under a fixed seed"};
  gen::Gen g(seed);
  Problem p = Problem::single_qubit_dephasing();
  p.steps = 100;
  for (int i = 0; i < cases; ++i) {
    NormSchedule s{g.uniform(0.2, 3.0), 0.0, 0.5, 2.0, 1.0, 1.0};
    s.norm_max = s.norm_min + 0.5;
    const std::uint64_t bank_seed = g.word();
    const SampleBank a = generate_bank(s, p, bank_seed, 1);
    const SampleBank b = generate_bank(s, p, bank_seed, 3);
    bool same = a.entries.size() == b.entries.size();
    double shell_err = 0.0;
    for (std::size_t k = 0; same && k < a.entries.size(); ++k) {
      const auto &x = a.entries[k], &y = b.entries[k];
      same = x.lambda == y.lambda && x.c == y.c && x.ok == y.ok && x.norm == y.norm;
      shell_err = std::max(shell_err, std::abs(x.lambda.norm() - x.norm));
    }
    o.record(same && shell_err < 1e-9, shell_err, "seed " + std::to_string(bank_seed));
  }
  return o;
}

}  // namespace props
