#include "geoctl/krotov.hpp"

#include <cmath>
#include <numbers>

#include "geoctl/error.hpp"

namespace geoctl {

double sine_squared_envelope(double t, double tau) {
  const double s = std::sin(std::numbers::pi * t / tau);
  return s * s;
}

double jt_functional(const std::vector<CVector>& finals, const std::vector<CVector>& targets) {
  if (finals.empty() || finals.size() != targets.size()) {
    fail(ErrorKind::Dimension, "jt_functional: need matching, non-empty state lists");
  }
  cplx sum = 0.0;
  for (std::size_t n = 0; n < finals.size(); ++n) {
    if (finals[n].size() != targets[n].size()) fail(ErrorKind::Dimension, "jt_functional: state size mismatch");
    if (std::abs(finals[n].norm() - 1.0) > 1e-8 || std::abs(targets[n].norm() - 1.0) > 1e-8) {
      fail(ErrorKind::Validation, "jt_functional: states must be normalized");
    }
    sum += targets[n].dot(finals[n]);  // conjugates the first argument
  }
  return 1.0 - std::norm(sum / static_cast<double>(finals.size()));
}

ControlField trivial_field(const GateTarget& target, const AlgebraBasis& basis, double tau, int steps) {
  if (target.c_target.size() != basis.size()) fail(ErrorKind::Dimension, "trivial_field: target/basis mismatch");
  const int d = basis.distribution_size();
  RMatrix values = target.c_target.head(d).transpose().replicate(steps + 1, 1);
  return ControlField(tau, std::move(values));
}

namespace {

class Sweeper {
 public:
  Sweeper(const GateTarget& target, const DriftSpec& drift, const AlgebraBasis& basis, double tau, int steps)
      : basis_(basis), n_(steps), dt_(tau / steps), target_(target.embedded) {
    for (int k = 0; k < n_; ++k) drift_mid_.push_back(drift.hamiltonian((k + 0.5) * dt_, basis));
  }

  int steps() const { return n_; }
  double dt() const { return dt_; }

  CMatrix midpoint_hamiltonian(int k, const RVector& left, const RVector& right) const {
    return drift_mid_[static_cast<std::size_t>(k)] + basis_.combine(RVector(0.5 * (left + right)));
  }

  /// Clean forward pass: the step propagators and U(tau).
  CMatrix propagate(const RMatrix& h, std::vector<CMatrix>& steps_out) const {
    steps_out.resize(static_cast<std::size_t>(n_));
    CMatrix u = CMatrix::Identity(target_.rows(), target_.cols());
    for (int k = 0; k < n_; ++k) {
      steps_out[static_cast<std::size_t>(k)] =
          expm_hermitian(midpoint_hamiltonian(k, h.row(k).transpose(), h.row(k + 1).transpose()), dt_);
      u = steps_out[static_cast<std::size_t>(k)] * u;
    }
    return u;
  }

  /// States are the columns of the identity, so the overlap sum is a trace.
  double jt(const CMatrix& u) const {
    return 1.0 - std::norm(normalized_trace_product(target_.adjoint(), u));
  }

  /// chi_n(t_k) for all k under the fields that produced `steps` and `u_final`.
  std::vector<CMatrix> backward(const std::vector<CMatrix>& steps, const CMatrix& u_final) const {
    const cplx overlap = normalized_trace_product(target_.adjoint(), u_final);
    std::vector<CMatrix> chi(static_cast<std::size_t>(n_) + 1);
    chi[static_cast<std::size_t>(n_)] = (overlap / static_cast<double>(target_.rows())) * target_;
    for (int k = n_ - 1; k >= 0; --k) {
      chi[static_cast<std::size_t>(k)] = steps[static_cast<std::size_t>(k)].adjoint() * chi[static_cast<std::size_t>(k) + 1];
    }
    return chi;
  }

  /// One sequential forward sweep: the field at t_k is updated from the
  /// current state before stepping to t_{k+1}.
  RMatrix forward_update(const RMatrix& old, const std::vector<CMatrix>& chi, double lambda,
                         const std::function<double(double, double)>& envelope, double tau) const {
    const int d = basis_.distribution_size();
    RMatrix h = old;
    CMatrix phi = CMatrix::Identity(target_.rows(), target_.cols());
    for (int k = 0; k <= n_; ++k) {
      const double s = envelope(k * dt_, tau);
      if (s != 0.0) {
        const CMatrix& x = chi[static_cast<std::size_t>(k)];
        for (int j = 0; j < d; ++j) {
          const cplx g = x.cwiseProduct((basis_.element(j) * phi).conjugate()).sum();
          // sum_n <chi_n| alpha_j |phi_n> = conj of the sum above
          h(k, j) = old(k, j) + lambda * s * (-g.imag());
        }
      }
      if (k < n_) {
        phi = expm_hermitian(midpoint_hamiltonian(k, h.row(k).transpose(), old.row(k + 1).transpose()), dt_) * phi;
      }
    }
    return h;
  }

 private:
  const AlgebraBasis& basis_;
  int n_;
  double dt_;
  CMatrix target_;
  std::vector<CMatrix> drift_mid_;
};

}  // namespace

KrotovResult krotov_optimize(const GateTarget& target, const DriftSpec& drift, const AlgebraBasis& basis,
                             const KrotovConfig& cfg, double tau, int steps) {
  if (!(cfg.lambda > 0.0)) fail(ErrorKind::Validation, "krotov: lambda must be positive");
  if (!(tau > 0.0) || steps < 2) fail(ErrorKind::Validation, "krotov: bad time grid");
  if (target.embedded.rows() != basis.dim()) fail(ErrorKind::Dimension, "krotov: target/basis mismatch");
  if (!cfg.envelope) fail(ErrorKind::Validation, "krotov: missing envelope");
  drift.validate(basis);

  ControlField field = cfg.initial ? *cfg.initial : trivial_field(target, basis, tau, steps);
  field.validate();
  if (!cfg.initial && cfg.guess_perturbation != 0.0) {
    for (int k = 0; k <= field.steps(); ++k) {
      const double t = field.time(k);
      const double a = cfg.guess_perturbation * cfg.envelope(t, tau);
      for (int j = 0; j < field.components(); ++j) {
        field.values(k, j) += a * std::cos(std::numbers::pi * (j + 1) * t / tau);
      }
    }
  }
  if (field.steps() != steps || field.components() != basis.distribution_size() ||
      std::abs(field.tau - tau) > 1e-12 * tau) {
    fail(ErrorKind::Dimension, "krotov: initial field does not match the grid or distribution");
  }

  const Sweeper sweeper(target, drift, basis, tau, steps);
  KrotovResult out;
  std::vector<CMatrix> props;
  CMatrix u = sweeper.propagate(field.values, props);
  double jt = sweeper.jt(u);
  out.jt_history.push_back(jt);
  double lambda = cfg.lambda;

  while (jt > cfg.jt_tol && out.iterations < cfg.max_iters) {
    const std::vector<CMatrix> chi = sweeper.backward(props, u);
    for (int attempt = 0;; ++attempt) {
      const RMatrix trial = sweeper.forward_update(field.values, chi, lambda, cfg.envelope, tau);
      std::vector<CMatrix> trial_props;
      const CMatrix trial_u = sweeper.propagate(trial, trial_props);
      const double trial_jt = sweeper.jt(trial_u);
      if (trial_jt <= jt + 1e-12) {
        field.values = trial;
        props = std::move(trial_props);
        u = trial_u;
        jt = trial_jt;
        break;
      }
      if (attempt >= cfg.max_halvings) {
        fail(ErrorKind::Convergence, "krotov: J_T keeps increasing after " + std::to_string(attempt) +
                                         " halvings of lambda; start from a smaller lambda");
      }
      lambda *= 0.5;
      ++out.halvings;
    }
    ++out.iterations;
    out.jt_history.push_back(jt);
  }

  out.field = std::move(field);
  out.final_jt = jt;
  out.final_lambda = lambda;
  out.converged = jt <= cfg.jt_tol;
  out.final_unitary = u;
  out.energy = energy(out.field, basis.metric_diagonal()).value;
  return out;
}

}  // namespace geoctl
