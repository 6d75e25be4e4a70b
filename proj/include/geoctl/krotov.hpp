#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "geoctl/geodesic.hpp"

namespace geoctl {

/// sin^2(pi t / tau): vanishes at both ends of the pulse.
double sine_squared_envelope(double t, double tau);

struct KrotovConfig {
  /// Step size multiplying S(t) in h <- h + lambda S(t) dh. Halved whenever an
  /// iteration would increase J_T.
  double lambda = 20.0;
  std::function<double(double t, double tau)> envelope = sine_squared_envelope;
  int max_iters = 5000;
  double jt_tol = 1e-7;
  /// Starting fields; the constant trivial-Hamiltonian field when empty.
  std::optional<ControlField> initial;
  /// Component j of the default starting field gets
  /// a * S(t) * cos(pi (j + 1) t / tau) added. From the bare constant field,
  /// T and CNOT sit on stationary points of J_T where every update vanishes.
  double guess_perturbation = 1.0;
  int max_halvings = 30;
};

struct KrotovResult {
  ControlField field;
  /// J_T before the first and after every accepted iteration.
  std::vector<double> jt_history;
  double final_jt = 1.0;
  int iterations = 0;
  double final_lambda = 0.0;
  int halvings = 0;
  bool converged = false;
  CMatrix final_unitary;
  double energy = 0.0;
};

/// 1 - |(1/N) sum_n <target_n | final_n>|^2.
double jt_functional(const std::vector<CVector>& finals, const std::vector<CVector>& targets);

/// Constant field equal to the distribution part of the target's c vector.
ControlField trivial_field(const GateTarget& target, const AlgebraBasis& basis, double tau, int steps);

/// Krotov iterations over the computational basis of the full (system plus
/// auxiliary) space, propagated with the midpoint-exponential stepper of
/// propagate_fields.
KrotovResult krotov_optimize(const GateTarget& target, const DriftSpec& drift, const AlgebraBasis& basis,
                             const KrotovConfig& cfg, double tau, int steps);

}  // namespace geoctl
