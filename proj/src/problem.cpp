#include "geoctl/problem.hpp"

#include <cmath>
#include <numbers>

#include "geoctl/error.hpp"

namespace geoctl {

Problem Problem::single_qubit_dephasing(const NoiseParams& p) {
  Problem out;
  out.noise = p;
  out.tau = p.tau;
  return out;
}

Problem Problem::two_qubit_crosstalk(double tau) {
  Problem out;
  out.n_qubits = 2;
  out.system_qubits = 2;
  out.distribution = {"x0", "y0", "z0", "0x", "0y", "0z"};
  out.drift_kind = "crosstalk";
  out.drift_labels = {"yy"};
  out.noise.tau = tau;
  out.tau = tau;
  return out;
}

void Problem::validate() const {
  if (n_qubits < 1 || n_qubits > 4) fail(ErrorKind::Validation, "problem: n_qubits must be 1..4");
  if (system_qubits < 1 || system_qubits > n_qubits) fail(ErrorKind::Validation, "problem: bad system_qubits");
  if (!(tau > 0.0)) fail(ErrorKind::Validation, "problem: tau must be positive");
  if (steps < 100) fail(ErrorKind::Validation, "problem: steps must be >= 100");
  if (drift_kind != "none" && drift_kind != "dephasing" && drift_kind != "crosstalk") {
    fail(ErrorKind::Validation, "problem: unknown drift kind '" + drift_kind + "'");
  }
  if (drift_kind == "crosstalk" && drift_labels.size() != 1) {
    fail(ErrorKind::Validation, "problem: crosstalk drift takes exactly one label");
  }
  if (drift_kind == "dephasing") {
    noise.validate();
    if (std::abs(noise.tau - tau) > 1e-12 * tau) fail(ErrorKind::Validation, "problem: noise tau differs from tau");
  }
}

AlgebraBasis Problem::basis() const {
  validate();
  const std::vector<std::string> none;
  return close_algebra(distribution, drift_kind == "none" ? none : drift_labels);
}

DriftSpec Problem::drift(const AlgebraBasis& b) const {
  if (drift_kind == "dephasing") return DriftSpec::dephasing(noise, b, drift_labels);
  if (drift_kind == "crosstalk") return DriftSpec::crosstalk(tau, b, drift_labels.front());
  return DriftSpec::none();
}

GeodesicShooter Problem::shooter() const { return shooter(steps); }

GeodesicShooter Problem::shooter(int steps_override) const {
  const AlgebraBasis b = basis();
  return GeodesicShooter(b, drift(b), tau, steps_override);
}

GateTarget Problem::target(const CMatrix& system_gate) const {
  if (system_gate.rows() != (1 << system_qubits)) {
    fail(ErrorKind::Dimension, "gate acts on " + std::to_string(system_gate.rows()) + " levels, problem expects " +
                                   std::to_string(1 << system_qubits));
  }
  return GateTarget::make(system_gate, basis(), tau);
}

CMatrix named_gate(const std::string& name) {
  const double r = std::numbers::sqrt2 / 2.0;
  CMatrix g;
  if (name == "I") {
    g = CMatrix::Identity(2, 2);
  } else if (name == "X" || name == "Y" || name == "Z") {
    g = pauli(name == "X" ? 1 : name == "Y" ? 2 : 3);
  } else if (name == "H") {
    g.resize(2, 2);
    g << r, r, r, -r;
  } else if (name == "S") {
    g = CMatrix::Identity(2, 2);
    g(1, 1) = kI;
  } else if (name == "T") {
    g = CMatrix::Identity(2, 2);
    g(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
  } else if (name == "CNOT" || name == "CZ" || name == "SWAP") {
    g = CMatrix::Zero(4, 4);
    if (name == "CNOT") {
      g(0, 0) = g(1, 1) = g(2, 3) = g(3, 2) = 1.0;
    } else if (name == "CZ") {
      g.diagonal() << 1.0, 1.0, 1.0, -1.0;
    } else {
      g(0, 0) = g(1, 2) = g(2, 1) = g(3, 3) = 1.0;
    }
  } else {
    fail(ErrorKind::Validation, "unknown gate '" + name + "'");
  }
  return g;
}

}  // namespace geoctl
