#include "geoctl/verify.hpp"

#include <cmath>

#include "geoctl/error.hpp"
#include "parallel.hpp"

namespace geoctl {

std::array<CVector, 6> pauli_eigenstates() {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  std::array<CVector, 6> s;
  for (auto& v : s) v = CVector::Zero(2);
  s[0] << r, r;
  s[1] << r, -r;
  s[2] << r, r * i;
  s[3] << r, -r * i;
  s[4] << 1.0, 0.0;
  s[5] << 0.0, 1.0;
  return s;
}

double state_fidelity(const CMatrix& rho, const CVector& psi) {
  if (rho.rows() != psi.size() || rho.cols() != psi.size()) fail(ErrorKind::Dimension, "state_fidelity: size mismatch");
  return std::clamp(psi.dot(rho * psi).real(), 0.0, 1.0);
}

VerificationReport average_gate_fidelity(const ControlField& field, const CMatrix& gate, const NoiseParams& p,
                                         int steps, int jobs) {
  field.validate();
  if (field.components() != 3) {
    fail(ErrorKind::Dimension, "verify: expected a single-qubit field with x, y, z components");
  }
  if (gate.rows() != 2 || gate.cols() != 2) fail(ErrorKind::Dimension, "verify: single-qubit target required");
  // transcribed gates carry ~6 digits
  if (unitarity_residual(gate) > 1e-4) fail(ErrorKind::Validation, "verify: target is not unitary");
  const CMatrix target = polar_unitary(gate);
  if (steps <= 0) steps = field.steps();

  NoiseParams q = p;
  q.tau = field.tau;
  const MasterEquation me(field, q, steps);
  const CMatrix& uc = me.control_propagators().back();
  const auto states = pauli_eigenstates();

  VerificationReport out;
  out.method = "master-equation";
  out.convention =
      "F(t) = <psi0|rho_IS(t)|psi0>; target_* = <U psi0|U_c rho_IS(tau) U_c^dagger|U psi0>, U the target, "
      "U_c the qubit control propagator";
  out.state_fidelity = RMatrix::Zero(steps + 1, 6);
  detail::parallel_for(states.size(), jobs, [&](std::size_t n) {
    const CVector& psi = states[n];
    const CMatrix rho0 = psi * psi.adjoint();
    const auto traj = me.evolve(rho0);
    for (int k = 0; k <= steps; ++k) {
      out.state_fidelity(k, static_cast<Eigen::Index>(n)) = state_fidelity(traj.rho[static_cast<std::size_t>(k)], psi);
    }
    const CMatrix lab = uc * traj.rho.back() * uc.adjoint();
    out.target_state_fidelity[n] = state_fidelity(lab, CVector(target * psi));
  });

  out.times.resize(static_cast<std::size_t>(steps) + 1);
  out.average.resize(out.times.size());
  for (int k = 0; k <= steps; ++k) {
    out.times[static_cast<std::size_t>(k)] = k * q.tau / steps;
    out.average[static_cast<std::size_t>(k)] = out.state_fidelity.row(k).mean();
  }
  out.average_at_tau = out.average.back();
  for (double f : out.target_state_fidelity) out.target_average_at_tau += f / 6.0;
  out.control_gate_fidelity = fidelity(uc, target);
  out.energy = energy(field, RVector::Ones(3)).value;
  return out;
}

double no_control_fidelity(const NoiseParams& p, int steps) {
  const MasterEquation me(std::nullopt, p, steps);
  const auto states = pauli_eigenstates();
  double sum = 0.0;
  for (int n = 0; n < 4; ++n) {
    const CVector& psi = states[static_cast<std::size_t>(n)];
    sum += state_fidelity(me.evolve(psi * psi.adjoint()).rho.back(), psi);
  }
  return sum / 4.0;
}

void replay(Solution& s) {
  s.problem.validate();
  const AlgebraBasis basis = s.problem.basis();
  const DriftSpec drift = s.problem.drift(basis);
  const GateTarget target = s.problem.target(s.target);
  const auto us = propagate_fields(s.field, drift, basis);
  s.fidelity.clear();
  s.fidelity.reserve(us.size());
  for (const auto& u : us) s.fidelity.push_back(fidelity(u, target));
  s.infidelity = 1.0 - s.fidelity.back();
  s.energy = energy(s.field, basis.metric_diagonal()).value;
}

Comparison compare(const Solution& a, const Solution& b) {
  if (a.target.rows() != b.target.rows() || !a.target.isApprox(b.target, 1e-9)) {
    fail(ErrorKind::Validation, "compare: solutions target different gates");
  }
  if (std::abs(a.field.tau - b.field.tau) > 1e-12 * a.field.tau) {
    fail(ErrorKind::Validation, "compare: solutions have different durations");
  }
  if (a.field.components() != b.field.components() || a.problem.distribution != b.problem.distribution) {
    fail(ErrorKind::Validation, "compare: solutions use different control distributions");
  }
  const RVector metric = a.problem.basis().metric_diagonal();
  const auto fill = [&](const Solution& s, std::vector<double>& t, std::vector<double>& dens, std::vector<double>& f) {
    const RVector e = energy_density(s.field, metric);
    dens.assign(e.data(), e.data() + e.size());
    t.resize(dens.size());
    for (int k = 0; k <= s.field.steps(); ++k) t[static_cast<std::size_t>(k)] = s.field.time(k);
    f = s.fidelity;
  };
  Comparison c;
  fill(a, c.times_a, c.density_a, c.fidelity_a);
  fill(b, c.times_b, c.density_b, c.fidelity_b);
  c.energy_a = energy(a.field, metric).value;
  c.energy_b = energy(b.field, metric).value;
  if (!(c.energy_b > 0.0)) fail(ErrorKind::Numerical, "compare: second solution has zero energy");
  c.ratio = c.energy_a / c.energy_b;
  return c;
}

}  // namespace geoctl
