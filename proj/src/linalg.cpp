#include "geoctl/linalg.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "geoctl/error.hpp"

namespace geoctl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::InvalidBasis: return "invalid-basis";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
    case ErrorKind::NotRepresentable: return "not-representable";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::StepSize: return "step-size";
    case ErrorKind::IntegratorAccuracy: return "integrator-accuracy";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Numerical: return "numerical";
  }
  return "unknown";
}

namespace {

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    fail(ErrorKind::Dimension, std::string(what) + ": expected a non-empty square matrix, got " +
                                   std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

cplx normalized_trace(const CMatrix& a) {
  require_square(a, "normalized_trace");
  return a.trace() / static_cast<double>(a.rows());
}

cplx normalized_trace_product(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    fail(ErrorKind::Dimension, "normalized_trace_product: incompatible shapes");
  }
  return a.cwiseProduct(b.transpose()).sum() / static_cast<double>(a.rows());
}

double unitarity_residual(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

double hermiticity_residual(const CMatrix& a) { return (a - a.adjoint()).norm(); }

CMatrix expm_hermitian(const CMatrix& h, double t) {
  require_square(h, "expm_hermitian");
  const double scale = std::max(1.0, h.norm());
  if (hermiticity_residual(h) > 1e-12 * scale) {
    fail(ErrorKind::Domain, "expm_hermitian: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix logm_unitary(const CMatrix& u) {
  require_square(u, "logm_unitary");
  // U is normal, so its complex Schur form is diagonal up to rounding and the
  // Schur vectors are an orthonormal eigenbasis even for repeated eigenvalues.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& q = schur.matrixU();
  const CMatrix& tri = schur.matrixT();
  CVector logs(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const cplx lambda = tri(k, k);
    double phase = std::arg(lambda);
    if (phase <= -std::numbers::pi) phase += 2.0 * std::numbers::pi;
    logs(k) = cplx(std::log(std::abs(lambda)), phase);
  }
  return q * logs.asDiagonal() * q.adjoint();
}

CMatrix polar_unitary(const CMatrix& u) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(u.adjoint() * u);
  const RVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return u * es.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

const CMatrix& pauli(int index) {
  static const std::array<CMatrix, 4> mats = [] {
    std::array<CMatrix, 4> m;
    m[0] = CMatrix::Identity(2, 2);
    m[1] = CMatrix::Zero(2, 2);
    m[1] << 0.0, 1.0, 1.0, 0.0;
    m[2] = CMatrix::Zero(2, 2);
    m[2] << 0.0, -kI, kI, 0.0;
    m[3] = CMatrix::Zero(2, 2);
    m[3] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  if (index < 0 || index > 3) fail(ErrorKind::Domain, "pauli: index out of range");
  return mats[static_cast<std::size_t>(index)];
}

}  // namespace geoctl
