#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "geoctl/linalg.hpp"

namespace geoctl {

/// A tensor product of single-qubit Paulis written one character per qubit,
/// first character = first tensor factor: '0' identity, 'x', 'y', 'z'.
/// "xz" is sigma_x (x) sigma_z.
class OperatorLabel {
 public:
  OperatorLabel() = default;
  explicit OperatorLabel(std::string symbols);

  int n_qubits() const { return static_cast<int>(symbols_.size()); }
  bool is_identity() const;
  const std::string& str() const { return symbols_; }
  /// 0..3 per qubit (0 identity, 1 x, 2 y, 3 z).
  int factor(int qubit) const;

  CMatrix matrix() const;

  /// True when the two Pauli strings anticommute, i.e. their commutator is nonzero.
  bool anticommutes_with(const OperatorLabel& other) const;
  /// Label of the product a*b with its phase dropped.
  OperatorLabel product_label(const OperatorLabel& other) const;

  /// Lexicographic over the symbol order 0 < x < y < z.
  auto operator<=>(const OperatorLabel& other) const = default;

 private:
  std::string symbols_;
};

/// Ordered Pauli-string basis of a Lie subalgebra of su(2^n). The first `d`
/// elements span the controllable distribution, the rest its complement.
/// Orthonormal under the normalized trace.
class AlgebraBasis {
 public:
  AlgebraBasis(int n_qubits, std::vector<OperatorLabel> labels, int distribution_size,
               RVector metric_diagonal = {});

  int n_qubits() const { return n_qubits_; }
  /// Matrix dimension 2^n.
  int dim() const { return dim_; }
  /// Total number of basis elements D.
  int size() const { return static_cast<int>(labels_.size()); }
  /// Distribution size d.
  int distribution_size() const { return distribution_size_; }

  const OperatorLabel& label(int j) const { return labels_.at(static_cast<std::size_t>(j)); }
  const std::vector<OperatorLabel>& labels() const { return labels_; }
  const CMatrix& element(int j) const { return elements_.at(static_cast<std::size_t>(j)); }
  /// Index of a label, or -1 when absent.
  int index_of(const OperatorLabel& label) const;

  /// Diagonal of the (diagonal, positive) distribution metric g_jk.
  const RVector& metric_diagonal() const { return metric_; }
  RMatrix metric() const { return metric_.asDiagonal(); }
  bool identity_metric() const;

  /// Real parts of ntr(X alpha_j) for all D elements.
  RVector coefficients(const CMatrix& x) const;
  /// sum_j c_j alpha_j over the first c.size() elements.
  CMatrix combine(std::span<const double> c) const;
  CMatrix combine(const RVector& c) const { return combine(std::span<const double>(c.data(), c.size())); }

 private:
  int n_qubits_;
  int dim_;
  int distribution_size_;
  std::vector<OperatorLabel> labels_;
  std::vector<CMatrix> elements_;
  RVector metric_;
};

/// Basis from explicit labels, distribution first, caller order preserved.
AlgebraBasis build_basis(int n_qubits, const std::vector<OperatorLabel>& distribution,
                         const std::vector<OperatorLabel>& extra);
AlgebraBasis build_basis(int n_qubits, const std::vector<std::string>& distribution,
                         const std::vector<std::string>& extra);

/// Smallest commutator-closed Pauli-string set containing the distribution and
/// drift labels. Distribution keeps caller order; the complement is sorted by label.
AlgebraBasis close_algebra(const std::vector<OperatorLabel>& distribution,
                           const std::vector<OperatorLabel>& drift);
AlgebraBasis close_algebra(const std::vector<std::string>& distribution,
                           const std::vector<std::string>& drift);

/// sum_{j,k<=d} g_jk alpha_j ntr(X alpha_k).
CMatrix project_distribution(const CMatrix& x, const AlgebraBasis& basis);

/// <x, y> = sum g_jk x^j y^k for x, y in the distribution.
double inner(const CMatrix& x, const CMatrix& y, const AlgebraBasis& basis);

struct CoefficientExtraction {
  RVector c;
  /// ||(i/tau) log U - sum_j c^j alpha_j||_F after removing the trace part.
  double residual = 0.0;
  bool representable() const;
};

inline constexpr double kRepresentabilityTolerance = 1e-8;

/// c^j = ntr((i/tau) log U alpha_j) on the principal branch, without throwing.
CoefficientExtraction log_coefficients(const CMatrix& u, double tau, const AlgebraBasis& basis);

/// Like log_coefficients but throws NotRepresentable when the residual exceeds 1e-8.
RVector extract_coefficients(const CMatrix& u, double tau, const AlgebraBasis& basis);

}  // namespace geoctl
