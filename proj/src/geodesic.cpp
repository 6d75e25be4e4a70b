#include "geoctl/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "geoctl/error.hpp"

namespace geoctl {

CoState::CoState(std::initializer_list<double> c) : coefficients(static_cast<Eigen::Index>(c.size())) {
  std::copy(c.begin(), c.end(), coefficients.data());
}

// ---------------------------------------------------------------------------
// Drift

DriftSpec DriftSpec::none() { return DriftSpec{}; }

namespace {

int require_element(const AlgebraBasis& basis, const std::string& label) {
  const int idx = basis.index_of(OperatorLabel(label));
  if (idx < 0) fail(ErrorKind::InvalidBasis, "drift element '" + label + "' is not in the basis");
  return idx;
}

}  // namespace

DriftSpec DriftSpec::dephasing(const NoiseParams& p, const AlgebraBasis& basis, const std::vector<std::string>& labels) {
  p.validate();
  DriftSpec out;
  out.kind_ = "dephasing";
  for (const auto& label : labels) {
    out.terms_.push_back({require_element(basis, label), [p](double t) { return drift_coefficient(t, p); }});
  }
  out.validate(basis);
  return out;
}

DriftSpec DriftSpec::crosstalk(double tau, const AlgebraBasis& basis, const std::string& label) {
  if (!(tau > 0.0)) fail(ErrorKind::Validation, "crosstalk: tau must be positive");
  DriftSpec out = constant(std::numbers::pi / (2.0 * tau), basis, label);
  out.kind_ = "crosstalk";
  return out;
}

DriftSpec DriftSpec::constant(double value, const AlgebraBasis& basis, const std::string& label) {
  DriftSpec out;
  out.kind_ = "constant";
  out.terms_.push_back({require_element(basis, label), [value](double) { return value; }});
  out.validate(basis);
  return out;
}

CMatrix DriftSpec::hamiltonian(double t, const AlgebraBasis& basis) const {
  CMatrix h = CMatrix::Zero(basis.dim(), basis.dim());
  for (const auto& term : terms_) h += term.coefficient(t) * basis.element(term.element);
  return h;
}

void DriftSpec::validate(const AlgebraBasis& basis) const {
  for (const auto& term : terms_) {
    if (term.element < basis.distribution_size() || term.element >= basis.size()) {
      fail(ErrorKind::InvalidBasis, "drift terms must lie in the distribution complement");
    }
  }
}

// ---------------------------------------------------------------------------
// Targets, fidelity, energy

GateTarget GateTarget::make(const CMatrix& system_unitary, const AlgebraBasis& basis, double tau) {
  if (system_unitary.rows() != system_unitary.cols()) fail(ErrorKind::Dimension, "gate must be square");
  if (unitarity_residual(system_unitary) > 1e-5) fail(ErrorKind::Validation, "gate is not unitary");
  if (basis.dim() % system_unitary.rows() != 0) {
    fail(ErrorKind::Dimension, "gate dimension does not divide the basis dimension");
  }
  GateTarget out;
  // Published gates carry six significant digits; snap to the group.
  out.system = polar_unitary(system_unitary);
  const auto aux = basis.dim() / system_unitary.rows();
  out.embedded = aux == 1 ? out.system : kron(out.system, CMatrix::Identity(aux, aux));
  out.tau = tau;
  out.c_target = extract_coefficients(out.embedded, tau, basis);

  const auto m = out.system.rows();
  const cplx det_root = std::pow(out.system.determinant(), 1.0 / static_cast<double>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m)) / det_root;
    const CoefficientExtraction x = log_coefficients(phase * out.embedded, tau, basis);
    if (!x.representable()) continue;
    const bool seen = std::any_of(out.c_equivalent.begin(), out.c_equivalent.end(),
                                  [&](const RVector& c) { return (c - x.c).norm() < 1e-9; });
    if (!seen) out.c_equivalent.push_back(x.c);
  }
  return out;
}

double fidelity(const CMatrix& u, const CMatrix& embedded_target) {
  if (u.rows() != embedded_target.rows() || u.cols() != embedded_target.cols()) {
    fail(ErrorKind::Dimension, "fidelity: dimension mismatch");
  }
  const double f = std::norm(normalized_trace_product(u.adjoint(), embedded_target));
  return std::clamp(f, 0.0, 1.0);
}

RVector energy_density(const ControlField& field, const RVector& metric_diagonal) {
  if (metric_diagonal.size() != field.components()) fail(ErrorKind::Dimension, "energy: metric size mismatch");
  return 0.5 * (field.values.array().square().matrix() * metric_diagonal);
}

EnergyResult energy(const ControlField& field, const RVector& metric_diagonal) {
  const RVector e = energy_density(field, metric_diagonal);
  const int n = field.steps();
  const double h = field.dt();
  EnergyResult out;
  if (n % 2 == 0) {
    double acc = e(0) + e(n);
    for (int k = 1; k < n; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * e(k);
    out.value = acc * h / 3.0;
  } else {
    out.value = h * (e.sum() - 0.5 * (e(0) + e(n)));
    out.trapezoid_fallback = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shooter

namespace {

template <int Dim>
class Kernel {
 public:
  using Mat = Eigen::Matrix<cplx, Dim, Dim>;

  Kernel(const AlgebraBasis& basis, const DriftSpec& drift, double tau, int steps)
      : n_(basis.dim()), d_(basis.distribution_size()), tau_(tau), steps_(steps), dt_(tau / steps) {
    for (int j = 0; j < d_; ++j) {
      dist_.emplace_back(basis.element(j));
      inv_metric_.push_back(1.0 / basis.metric_diagonal()(j));
    }
    const std::size_t half = 2 * static_cast<std::size_t>(steps) + 1;
    for (const auto& term : drift.terms()) {
      drift_mats_.emplace_back(basis.element(term.element));
      std::vector<double> table(half);
      for (std::size_t m = 0; m < half; ++m) table[m] = term.coefficient(0.5 * dt_ * static_cast<double>(m));
      drift_table_.push_back(std::move(table));
    }
  }

  int steps() const { return steps_; }
  double dt() const { return dt_; }
  int distribution_size() const { return d_; }

  /// Observer is called with (k, U(t_k), h(t_k)) for k = 0..N.
  template <class Observer>
  Mat run(const Mat& lambda0, Observer&& observe) const {
    const Mat id = Mat::Identity(n_, n_);
    Mat u = id;
    std::vector<double> h(static_cast<std::size_t>(d_));
    std::vector<double> scratch(static_cast<std::size_t>(d_));
    for (int k = 0; k < steps_; ++k) {
      const std::size_t m = 2 * static_cast<std::size_t>(k);
      const Mat k1 = rhs(u, lambda0, m, h.data());
      observe(k, u, h);
      const Mat k2 = rhs(u + (0.5 * dt_) * k1, lambda0, m + 1, scratch.data());
      const Mat k3 = rhs(u + (0.5 * dt_) * k2, lambda0, m + 1, scratch.data());
      const Mat k4 = rhs(u + dt_ * k3, lambda0, m + 2, scratch.data());
      u += (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      // One Newton-Schulz step of the polar projection U (U^dagger U)^{-1/2};
      // the pre-projection residual r leaves O(r^2) afterwards.
      const Mat gram = u.adjoint() * u;
      const double r = (gram - id).norm();
      if (!(r < 1e-4)) {
        fail(ErrorKind::StepSize, "geodesic: unitarity lost (residual " + std::to_string(r) + "); increase steps");
      }
      u = u * (1.5 * id - 0.5 * gram);
    }
    controls(u, lambda0, h.data());
    observe(steps_, u, h);
    return u;
  }

 private:
  void controls(const Mat& u, const Mat& lambda0, double* h) const {
    const Mat lt = u * lambda0 * u.adjoint();
    for (int j = 0; j < d_; ++j) {
      h[j] = lt.cwiseProduct(dist_[static_cast<std::size_t>(j)].transpose()).sum().real() / n_ *
             inv_metric_[static_cast<std::size_t>(j)];
    }
  }

  Mat rhs(const Mat& u, const Mat& lambda0, std::size_t m, double* h) const {
    controls(u, lambda0, h);
    Mat ham = Mat::Zero(n_, n_);
    for (int j = 0; j < d_; ++j) ham += h[j] * dist_[static_cast<std::size_t>(j)];
    for (std::size_t t = 0; t < drift_mats_.size(); ++t) ham += drift_table_[t][m] * drift_mats_[t];
    return cplx(0.0, -1.0) * (ham * u);
  }

  int n_;
  int d_;
  double tau_;
  int steps_;
  double dt_;
  std::vector<Mat> dist_;
  std::vector<double> inv_metric_;
  std::vector<Mat> drift_mats_;
  std::vector<std::vector<double>> drift_table_;
};

using AnyKernel = std::variant<Kernel<2>, Kernel<4>, Kernel<Eigen::Dynamic>>;

AnyKernel make_kernel(const AlgebraBasis& basis, const DriftSpec& drift, double tau, int steps) {
  switch (basis.dim()) {
    case 2: return Kernel<2>(basis, drift, tau, steps);
    case 4: return Kernel<4>(basis, drift, tau, steps);
    default: return Kernel<Eigen::Dynamic>(basis, drift, tau, steps);
  }
}

}  // namespace

struct GeodesicShooter::Impl {
  AlgebraBasis basis;
  double tau;
  int steps;
  AnyKernel kernel;

  CMatrix lambda_matrix(const CoState& costate) const {
    if (costate.size() != basis.size()) {
      fail(ErrorKind::Dimension, "co-state has " + std::to_string(costate.size()) + " entries, basis has " +
                                     std::to_string(basis.size()));
    }
    if (!costate.coefficients.allFinite()) fail(ErrorKind::Validation, "co-state has non-finite entries");
    return basis.combine(costate.coefficients);
  }
};

GeodesicShooter::GeodesicShooter(const AlgebraBasis& basis, const DriftSpec& drift, double tau, int steps) {
  if (!(tau > 0.0)) fail(ErrorKind::Validation, "geodesic: tau must be positive");
  if (steps < 100) fail(ErrorKind::Validation, "geodesic: need at least 100 steps");
  drift.validate(basis);
  impl_ = std::make_unique<Impl>(Impl{basis, tau, steps, make_kernel(basis, drift, tau, steps)});
}

GeodesicShooter::~GeodesicShooter() = default;
GeodesicShooter::GeodesicShooter(GeodesicShooter&&) noexcept = default;
GeodesicShooter& GeodesicShooter::operator=(GeodesicShooter&&) noexcept = default;

const AlgebraBasis& GeodesicShooter::basis() const { return impl_->basis; }
double GeodesicShooter::tau() const { return impl_->tau; }
int GeodesicShooter::steps() const { return impl_->steps; }

CMatrix GeodesicShooter::final_unitary(const CoState& costate) const {
  const CMatrix lambda0 = impl_->lambda_matrix(costate);
  return std::visit(
      [&](const auto& k) -> CMatrix {
        using Mat = typename std::decay_t<decltype(k)>::Mat;
        return k.run(Mat(lambda0), [](int, const Mat&, const std::vector<double>&) {});
      },
      impl_->kernel);
}

double GeodesicShooter::infidelity(const CoState& costate, const GateTarget& target) const {
  return 1.0 - fidelity(final_unitary(costate), target);
}

std::vector<CMatrix> GeodesicShooter::trajectory(const CoState& costate) const {
  const CMatrix lambda0 = impl_->lambda_matrix(costate);
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(impl_->steps) + 1);
  std::visit(
      [&](const auto& k) {
        using Mat = typename std::decay_t<decltype(k)>::Mat;
        k.run(Mat(lambda0), [&](int, const Mat& u, const std::vector<double>&) { out.emplace_back(u); });
      },
      impl_->kernel);
  return out;
}

GeodesicSolution GeodesicShooter::solve(const CoState& costate, const GateTarget* target) const {
  const CMatrix lambda0 = impl_->lambda_matrix(costate);
  const AlgebraBasis& basis = impl_->basis;
  const int n = impl_->steps;
  const int d = basis.distribution_size();
  if (target && target->embedded.rows() != basis.dim()) fail(ErrorKind::Dimension, "target dimension mismatch");

  GeodesicSolution sol;
  sol.costate = costate;
  RMatrix h(n + 1, d);
  if (target) sol.fidelity.resize(static_cast<std::size_t>(n) + 1);

  sol.final_unitary = std::visit(
      [&](const auto& k) -> CMatrix {
        using Mat = typename std::decay_t<decltype(k)>::Mat;
        Mat tgt;
        if (target) tgt = target->embedded;
        return k.run(Mat(lambda0), [&](int step, const Mat& u, const std::vector<double>& hk) {
          for (int j = 0; j < d; ++j) h(step, j) = hk[static_cast<std::size_t>(j)];
          if (target) {
            sol.fidelity[static_cast<std::size_t>(step)] =
                std::clamp(std::norm((u.adjoint() * tgt).trace() / static_cast<double>(u.rows())), 0.0, 1.0);
          }
          sol.max_unitarity_residual = std::max(sol.max_unitarity_residual, unitarity_residual(u));
        });
      },
      impl_->kernel);

  if (sol.max_unitarity_residual > 1e-8) {
    fail(ErrorKind::StepSize, "geodesic: unitarity residual above 1e-8 after projection");
  }
  sol.field = ControlField(impl_->tau, std::move(h));
  const EnergyResult e = energy(sol.field, basis.metric_diagonal());
  sol.energy = e.value;
  sol.energy_trapezoid = e.trapezoid_fallback;
  if (target) sol.infidelity = 1.0 - fidelity(sol.final_unitary, *target);
  return sol;
}

GeodesicSolution integrate_geodesic(const CoState& costate, const DriftSpec& drift, const AlgebraBasis& basis,
                                    double tau, int steps, const GateTarget* target) {
  return GeodesicShooter(basis, drift, tau, steps).solve(costate, target);
}

std::vector<CMatrix> propagate_fields(const ControlField& field, const DriftSpec& drift, const AlgebraBasis& basis) {
  field.validate();
  if (field.components() != basis.distribution_size()) {
    fail(ErrorKind::Dimension, "propagate_fields: field has " + std::to_string(field.components()) +
                                   " components, distribution has " + std::to_string(basis.distribution_size()));
  }
  drift.validate(basis);
  const int n = field.steps();
  const double dt = field.dt();
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  CMatrix u = CMatrix::Identity(basis.dim(), basis.dim());
  out.push_back(u);
  for (int k = 0; k < n; ++k) {
    const RVector mid = 0.5 * (field.values.row(k) + field.values.row(k + 1)).transpose();
    const CMatrix ham = basis.combine(mid) + drift.hamiltonian((k + 0.5) * dt, basis);
    u = expm_hermitian(ham, dt) * u;
    out.push_back(u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

std::string Classification::str() const {
  return kind == Kind::GlobalCandidate ? "GLOBAL_CANDIDATE" : "OVERSHOOT(" + std::to_string(overshoots) + ")";
}

Classification Classification::parse(const std::string& s) {
  if (s == "GLOBAL_CANDIDATE") return {};
  if (s.starts_with("OVERSHOOT(") && s.ends_with(")")) {
    return {Kind::Overshoot, std::stoi(s.substr(10, s.size() - 11))};
  }
  fail(ErrorKind::Validation, "unknown classification '" + s + "'");
}

Classification classify_trajectory(std::span<const double> f, double epsilon) {
  if (f.size() < 3) fail(ErrorKind::Validation, "classification: trace too short");
  if (1.0 - f.back() > 1e-6) {
    fail(ErrorKind::Convergence, "classification refused: final infidelity " + std::to_string(1.0 - f.back()) +
                                     " is above 1e-6");
  }
  // A peak must be followed by a dip of at least this much to count.
  constexpr double kProminence = 1e-8;
  int peaks = 0;
  const std::size_t last = f.size() - 1;
  for (std::size_t i = 1; i < last; ++i) {
    if (!(f[i] > f[i - 1] && f[i] >= f[i + 1] && f[i] > 1.0 - epsilon)) continue;
    std::size_t j = i;
    while (j < last && f[j + 1] <= f[j]) ++j;
    if (j < last && f[i] - f[j] > kProminence) ++peaks;
  }
  if (peaks == 0) return {};
  return {Classification::Kind::Overshoot, peaks};
}

}  // namespace geoctl
