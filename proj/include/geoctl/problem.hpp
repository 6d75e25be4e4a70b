#pragma once

#include <string>
#include <vector>

#include "geoctl/dephasing.hpp"
#include "geoctl/geodesic.hpp"
#include "geoctl/lie.hpp"

namespace geoctl {

/// Everything needed to rebuild a basis, drift and grid: what bank headers
/// and reports record.
struct Problem {
  int n_qubits = 2;
  /// Qubits the target gate acts on; the rest are auxiliary.
  int system_qubits = 1;
  std::vector<std::string> distribution{"x0", "y0", "z0"};
  /// "none", "dephasing" or "crosstalk".
  std::string drift_kind = "dephasing";
  std::vector<std::string> drift_labels{"zz"};
  NoiseParams noise;
  double tau = 1.0;
  int steps = 2000;

  /// One qubit plus its purification partner under Ohmic dephasing.
  static Problem single_qubit_dephasing(const NoiseParams& p = {});
  /// Two qubits with local controls and a constant sigma_y (x) sigma_y crosstalk.
  static Problem two_qubit_crosstalk(double tau = 1.0);

  AlgebraBasis basis() const;
  DriftSpec drift(const AlgebraBasis& basis) const;
  GeodesicShooter shooter() const;
  GeodesicShooter shooter(int steps_override) const;
  GateTarget target(const CMatrix& system_gate) const;

  void validate() const;
};

/// Named gates: I, X, Y, Z, H, S, T (one qubit), CNOT, CZ, SWAP (two qubits).
CMatrix named_gate(const std::string& name);

}  // namespace geoctl
