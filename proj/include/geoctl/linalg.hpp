#pragma once

#include <complex>

#include <Eigen/Dense>

namespace geoctl {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Trace divided by the matrix dimension, so that ntr(I) = 1.
cplx normalized_trace(const CMatrix& a);

/// ntr(a * b) without forming the product.
cplx normalized_trace_product(const CMatrix& a, const CMatrix& b);

/// exp(-i t H) for Hermitian H, via a self-adjoint eigendecomposition.
CMatrix expm_hermitian(const CMatrix& h, double t);

/// Principal matrix logarithm of a unitary, eigenphases in (-pi, pi].
CMatrix logm_unitary(const CMatrix& u);

/// Closest unitary in Frobenius norm, U (U^dagger U)^{-1/2}.
CMatrix polar_unitary(const CMatrix& u);

/// ||U^dagger U - I||_F.
double unitarity_residual(const CMatrix& u);

/// ||A - A^dagger||_F.
double hermiticity_residual(const CMatrix& a);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Pauli matrices indexed 0 (identity), 1 (x), 2 (y), 3 (z).
const CMatrix& pauli(int index);

}  // namespace geoctl
