#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geoctl/dephasing.hpp"
#include "geoctl/field.hpp"
#include "geoctl/geodesic.hpp"
#include "geoctl/problem.hpp"

namespace geoctl {

/// |+x>, |-x>, |+y>, |-y>, |0>, |1>.
std::array<CVector, 6> pauli_eigenstates();

/// <psi| rho |psi> for a pure target psi.
double state_fidelity(const CMatrix& rho, const CVector& psi);

struct VerificationReport {
  std::string method;
  std::vector<double> times;
  /// Row k: fidelities of the six initial states at t_k.
  RMatrix state_fidelity;
  std::vector<double> average;
  /// average.back(), the number to compare with published values.
  double average_at_tau = 0.0;
  /// Lab frame at tau: <U psi0| U_c rho_IS U_c^dagger |U psi0> per state, and their mean.
  std::array<double, 6> target_state_fidelity{};
  double target_average_at_tau = 0.0;
  double energy = 0.0;
  std::string classification;
  /// |ntr(U_c(tau)^dagger U_target)|^2 of the qubit-only control propagator.
  double control_gate_fidelity = 0.0;
  std::string convention;
};

/// Evolves each Pauli eigenstate under the master equation with the field's
/// sigma_x, sigma_y, sigma_z components as control. The trace is the
/// interaction-picture fidelity <psi0| rho_IS(t) |psi0>: the noisy state against
/// the noiseless evolution under the same qubit control. The lab-frame
/// comparison with the target gate at tau is reported alongside.
/// `field` must have 3 columns (one qubit's x, y, z controls); `steps` <= 0
/// uses the field's grid.
VerificationReport average_gate_fidelity(const ControlField& field, const CMatrix& target, const NoiseParams& p,
                                         int steps = 0, int jobs = 1);

/// Zero control, identity target, mean fidelity at tau of the four superposition
/// eigenstates (+-x, +-y).
double no_control_fidelity(const NoiseParams& p, int steps = 2000);

/// A stored control solution: what synth and krotov write and compare reads.
struct Solution {
  std::string method;  // "geodesic" or "krotov"
  std::string gate;
  Problem problem;
  CMatrix target;  // system gate
  ControlField field;
  double energy = 0.0;
  double infidelity = 1.0;
  std::vector<double> fidelity;  // |ntr(U(t_k)^dagger T)|^2
  std::string classification;
  std::optional<CoState> costate;
  std::vector<double> jt_history;
};

/// Fills energy, fidelity trace and infidelity of `s` by replaying its field.
void replay(Solution& s);

struct Comparison {
  std::vector<double> times_a, times_b;
  std::vector<double> density_a, density_b;
  std::vector<double> fidelity_a, fidelity_b;
  double energy_a = 0.0;
  double energy_b = 0.0;
  /// energy_a / energy_b.
  double ratio = 0.0;
};

/// Both solutions must target the same gate over the same duration and problem.
Comparison compare(const Solution& a, const Solution& b);

}  // namespace geoctl
