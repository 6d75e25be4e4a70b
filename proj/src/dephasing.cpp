#include "geoctl/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "geoctl/error.hpp"
#include "geoctl/special.hpp"

namespace geoctl {

void NoiseParams::validate() const {
  if (!(eta >= 0.0)) fail(ErrorKind::Validation, "noise: eta must be >= 0");
  if (!(omega_c > 0.0)) fail(ErrorKind::Validation, "noise: omega_c must be > 0");
  if (!(theta > 0.0)) fail(ErrorKind::Validation, "noise: theta must be > 0");
  if (!(tau > 0.0)) fail(ErrorKind::Validation, "noise: tau must be > 0");
}

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) fail(ErrorKind::Domain, "dephasing: time must be >= 0");
}

}  // namespace

double log_mu(double t, const NoiseParams& p) {
  require_time(t);
  if (p.eta == 0.0) return 0.0;
  const double a = 1.0 + p.theta;
  const double wt = p.omega_c * t;
  const double gamma_ratio = special::log_gamma({a, t / p.beta()}).real() - special::log_gamma({a, 0.0}).real();
  return 8.0 * p.eta * (gamma_ratio - 0.25 * std::log1p(wt * wt));
}

double mu(double t, const NoiseParams& p) { return std::exp(log_mu(t, p)); }

double mu_dot(double t, const NoiseParams& p) {
  require_time(t);
  if (p.eta == 0.0) return 0.0;
  const double inv_beta = 1.0 / p.beta();
  const cplx z(1.0 + p.theta, t * inv_beta);
  const double wc2 = p.omega_c * p.omega_c;
  const double dlog = 8.0 * p.eta * (-special::digamma(z).imag() * inv_beta - 0.5 * wc2 * t / (1.0 + wc2 * t * t));
  return mu(t, p) * dlog;
}

double mu_curvature(const NoiseParams& p) {
  const double inv_beta = 1.0 / p.beta();
  const double psi1 = special::trigamma({1.0 + p.theta, 0.0}).real();
  return 4.0 * p.eta * (psi1 * inv_beta * inv_beta + 0.5 * p.omega_c * p.omega_c);
}

double drift_coefficient(double t, const NoiseParams& p) {
  require_time(t);
  if (p.eta == 0.0) return 0.0;
  // f is even in t, so the constant limit is accurate to O(t^2) below t0.
  const double t0 = 1e-4 * p.tau;
  if (t < t0) return std::sqrt(0.5 * mu_curvature(p));
  const double lm = log_mu(t, p);
  const double one_minus_mu2 = -std::expm1(2.0 * lm);
  if (!(one_minus_mu2 > 0.0)) {
    fail(ErrorKind::Singularity, "drift_coefficient: mu(t) >= 1 at t = " + std::to_string(t));
  }
  return -mu_dot(t, p) / (2.0 * std::sqrt(one_minus_mu2));
}

CMatrix purification_unitary(double t, const NoiseParams& p) {
  const double m = std::clamp(mu(t, p), -1.0, 1.0);
  const CMatrix k0 = std::sqrt(0.5 * (1.0 + m)) * pauli(0);
  const CMatrix k1 = kI * std::sqrt(0.5 * (1.0 - m)) * pauli(3);
  return kron(k0, pauli(0)) + kron(k1, pauli(3));
}

cplx bath_correlation(double s, const NoiseParams& p) {
  require_time(s);
  // coth(x/2) = 1 + 2 sum_n exp(-n x) turns the thermal integral into
  // sum_n Re 1/(a_n + i s)^2 with a_n = 1/omega_c + n beta, i.e. a trigamma.
  const double a0 = 1.0 / p.omega_c;
  const double beta = p.beta();
  const cplx z(a0, s);
  const cplx vacuum = 1.0 / (z * z);
  const double thermal = 2.0 / (beta * beta) * special::trigamma(1.0 + z / beta).real();
  return p.eta * (vacuum + thermal);
}

CMatrix analytic_dephasing(const CMatrix& rho0, double t, const NoiseParams& p) {
  if (rho0.rows() != 2 || rho0.cols() != 2) fail(ErrorKind::Dimension, "analytic_dephasing: expected a 2x2 state");
  CMatrix out = rho0;
  const double m = mu(t, p);
  out(0, 1) *= m;
  out(1, 0) *= m;
  return out;
}

void validate_density_matrix(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || (rho.rows() != 2 && rho.rows() != 4)) {
    fail(ErrorKind::Dimension, "density matrix must be 2x2 or 4x4");
  }
  if (hermiticity_residual(rho) > 1e-10) fail(ErrorKind::Validation, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-10) fail(ErrorKind::Validation, "density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-8) fail(ErrorKind::Validation, "density matrix has a negative eigenvalue");
}

MasterEquation::MasterEquation(const std::optional<ControlField>& control, const NoiseParams& p, int steps)
    : p_(p), steps_(steps) {
  p.validate();
  if (steps < 2) fail(ErrorKind::Validation, "master equation: need at least 2 steps");
  if (control && control->components() != 3) {
    fail(ErrorKind::Dimension, "master equation: control must have sigma_x, sigma_y, sigma_z columns");
  }
  if (control && std::abs(control->tau - p.tau) > 1e-12 * p.tau) {
    fail(ErrorKind::Validation, "master equation: control duration differs from tau");
  }
  const std::size_t half = 2 * static_cast<std::size_t>(steps) + 1;
  const double h = p.tau / (2.0 * steps);

  // S(t) = U_c^dagger sigma_z U_c on the half grid, midpoint-exponential propagation.
  Eigen::Matrix2cd sx, sy, sz;
  sx = pauli(1);
  sy = pauli(2);
  sz = pauli(3);
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  s_.resize(half);
  propagators_.reserve(static_cast<std::size_t>(steps) + 1);
  for (std::size_t m = 0; m < half; ++m) {
    s_[m] = u.adjoint() * sz * u;
    if (m % 2 == 0) propagators_.emplace_back(u);
    if (m + 1 == half) break;
    if (control) {
      const RVector hm = control->at((static_cast<double>(m) + 0.5) * h);
      const Eigen::Matrix2cd ham = hm(0) * sx + hm(1) * sy + hm(2) * sz;
      u = expm_hermitian(ham, h) * u;
    }
  }

  std::vector<cplx> corr(half);
  for (std::size_t m = 0; m < half; ++m) corr[m] = bath_correlation(static_cast<double>(m) * h, p);

  memory_.assign(half, Eigen::Matrix2cd::Zero());
  for (std::size_t m = 1; m < half; ++m) {
    Eigen::Matrix2cd acc = 0.5 * (corr[m] * s_[0] + corr[0] * s_[m]);
    for (std::size_t j = 1; j < m; ++j) acc += corr[m - j] * s_[j];
    memory_[m] = h * acc;
  }
}

Eigen::Matrix2cd MasterEquation::rhs(std::size_t m, const Eigen::Matrix2cd& rho) const {
  // -int {C(t-t')[S(t)S(t')rho - S(t')rho S(t)] + h.c.} = -[S, M rho - rho M^dagger]
  const Eigen::Matrix2cd k = memory_[m] * rho - rho * memory_[m].adjoint();
  return -(s_[m] * k - k * s_[m]);
}

MasterEquation::Trajectory MasterEquation::evolve(const CMatrix& rho0) const {
  if (rho0.rows() != 2 || rho0.cols() != 2) fail(ErrorKind::Dimension, "master equation: expected a 2x2 state");
  validate_density_matrix(rho0);
  const double dt = p_.tau / steps_;
  Trajectory out;
  out.rho.reserve(static_cast<std::size_t>(steps_) + 1);
  Eigen::Matrix2cd rho = rho0;
  out.rho.emplace_back(rho);
  for (int k = 0; k < steps_; ++k) {
    const std::size_t m = 2 * static_cast<std::size_t>(k);
    const Eigen::Matrix2cd k1 = rhs(m, rho);
    const Eigen::Matrix2cd k2 = rhs(m + 1, rho + 0.5 * dt * k1);
    const Eigen::Matrix2cd k3 = rhs(m + 1, rho + 0.5 * dt * k2);
    const Eigen::Matrix2cd k4 = rhs(m + 2, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.rho.emplace_back(rho);

    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(rho.trace() - 1.0));
    out.max_hermiticity_residual = std::max(out.max_hermiticity_residual, (rho - rho.adjoint()).norm());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    out.min_eigenvalue = std::min(out.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  if (out.max_trace_drift > 1e-6) {
    fail(ErrorKind::IntegratorAccuracy, "master equation: trace drift " + std::to_string(out.max_trace_drift) +
                                            " exceeds 1e-6; use a finer grid");
  }
  return out;
}

}  // namespace geoctl
