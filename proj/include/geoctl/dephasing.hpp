#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "geoctl/field.hpp"
#include "geoctl/linalg.hpp"

namespace geoctl {

/// Ohmic dephasing bath, J(w) = eta w exp(-w / omega_c), natural units (hbar = 1).
struct NoiseParams {
  double eta = 0.35;
  double omega_c = 2.0 * std::numbers::pi / 10.0;  // 2 pi / (10 tau)
  /// Dimensionless temperature 1 / (beta omega_c).
  double theta = 1.0;
  double tau = 1.0;

  double beta() const { return 1.0 / (theta * omega_c); }
  void validate() const;
};

/// Coherence decay factor of the uncontrolled qubit,
/// [ |Gamma(1 + theta + i t/beta)| / ((1 + wc^2 t^2)^(1/4) Gamma(1 + theta)) ]^(8 eta).
double mu(double t, const NoiseParams& p);
double log_mu(double t, const NoiseParams& p);
/// d mu / dt, from the digamma function.
double mu_dot(double t, const NoiseParams& p);
/// a in mu(t) = 1 - a t^2 + O(t^4).
double mu_curvature(const NoiseParams& p);

/// Scalar f(t) of the auxiliary-qubit drift H_D(t) = f(t) sigma_z (x) sigma_z,
/// f = -mu_dot / (2 sqrt(1 - mu^2)). Finite limit sqrt(a/2) at t -> 0.
double drift_coefficient(double t, const NoiseParams& p);

/// K0 (x) I + K1 (x) sigma_z with K0 = sqrt((1+mu)/2) I, K1 = i sqrt((1-mu)/2) sigma_z.
/// The qubit evolves under U_D^dagger, whose generator is the drift above.
CMatrix purification_unitary(double t, const NoiseParams& p);

/// C(s) = int_0^inf J(w) [coth(beta w / 2) cos(w s) - i sin(w s)] dw, closed form
/// through the trigamma function.
cplx bath_correlation(double s, const NoiseParams& p);

/// Diagonal kept, coherences multiplied by mu(t).
CMatrix analytic_dephasing(const CMatrix& rho0, double t, const NoiseParams& p);

/// Time-local second-order master equation for one qubit in the interaction
/// picture of its control Hamiltonian. S(t) and the memory kernel do not depend
/// on the initial state, so one instance evolves any number of states.
class MasterEquation {
 public:
  /// `control` columns are the amplitudes of sigma_x, sigma_y, sigma_z on the qubit;
  /// std::nullopt means no control.
  MasterEquation(const std::optional<ControlField>& control, const NoiseParams& p, int steps);

  int steps() const { return steps_; }
  double dt() const { return p_.tau / steps_; }
  /// U_c(t_k) at the N+1 outer grid points.
  const std::vector<CMatrix>& control_propagators() const { return propagators_; }

  struct Trajectory {
    std::vector<CMatrix> rho;  // rho_IS(t_k), k = 0..N
    double max_trace_drift = 0.0;
    double max_hermiticity_residual = 0.0;
    double min_eigenvalue = 1.0;
  };

  /// Throws IntegratorAccuracy when the trace drifts by more than 1e-6.
  Trajectory evolve(const CMatrix& rho0) const;

 private:
  Eigen::Matrix2cd rhs(std::size_t half_index, const Eigen::Matrix2cd& rho) const;

  NoiseParams p_;
  int steps_;
  std::vector<Eigen::Matrix2cd> s_;       // S(t) on the half grid, 2N+1 points
  std::vector<Eigen::Matrix2cd> memory_;  // int_0^t C(t-t') S(t') dt' on the half grid
  std::vector<CMatrix> propagators_;
};

inline MasterEquation::Trajectory evolve_master_equation(const std::optional<ControlField>& control,
                                                         const CMatrix& rho0, const NoiseParams& p, int steps) {
  return MasterEquation(control, p, steps).evolve(rho0);
}

void validate_density_matrix(const CMatrix& rho);

}  // namespace geoctl
