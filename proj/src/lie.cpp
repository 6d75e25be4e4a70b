#include "geoctl/lie.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "geoctl/error.hpp"

namespace geoctl {

namespace {

constexpr char kSymbols[4] = {'0', 'x', 'y', 'z'};

int symbol_index(char ch) {
  switch (std::tolower(static_cast<unsigned char>(ch))) {
    case '0':
    case 'i': return 0;
    case 'x': return 1;
    case 'y': return 2;
    case 'z': return 3;
    default: return -1;
  }
}

}  // namespace

OperatorLabel::OperatorLabel(std::string symbols) {
  if (symbols.empty()) fail(ErrorKind::InvalidBasis, "operator label must not be empty");
  for (char& ch : symbols) {
    const int idx = symbol_index(ch);
    if (idx < 0) fail(ErrorKind::InvalidBasis, "operator label '" + symbols + "' has symbol outside {0,x,y,z}");
    ch = kSymbols[idx];
  }
  symbols_ = std::move(symbols);
}

bool OperatorLabel::is_identity() const {
  return std::all_of(symbols_.begin(), symbols_.end(), [](char c) { return c == '0'; });
}

int OperatorLabel::factor(int qubit) const { return symbol_index(symbols_.at(static_cast<std::size_t>(qubit))); }

CMatrix OperatorLabel::matrix() const {
  CMatrix out = pauli(factor(0));
  for (int q = 1; q < n_qubits(); ++q) out = kron(out, pauli(factor(q)));
  return out;
}

bool OperatorLabel::anticommutes_with(const OperatorLabel& other) const {
  int clashes = 0;
  for (int q = 0; q < n_qubits(); ++q) {
    const int a = factor(q);
    const int b = other.factor(q);
    if (a != 0 && b != 0 && a != b) ++clashes;
  }
  return clashes % 2 == 1;
}

OperatorLabel OperatorLabel::product_label(const OperatorLabel& other) const {
  std::string out(symbols_.size(), '0');
  for (int q = 0; q < n_qubits(); ++q) {
    const int a = factor(q);
    const int b = other.factor(q);
    // Pauli indices multiply like the Klein four-group: xy ~ z, x x ~ 0, etc.
    out[static_cast<std::size_t>(q)] = kSymbols[a ^ b];
  }
  return OperatorLabel(std::move(out));
}

AlgebraBasis::AlgebraBasis(int n_qubits, std::vector<OperatorLabel> labels, int distribution_size,
                           RVector metric_diagonal)
    : n_qubits_(n_qubits), dim_(1 << n_qubits), distribution_size_(distribution_size), labels_(std::move(labels)) {
  if (n_qubits <= 0 || n_qubits > 6) fail(ErrorKind::InvalidBasis, "n_qubits must be in [1, 6]");
  if (distribution_size < 0 || distribution_size > size()) {
    fail(ErrorKind::InvalidBasis, "distribution size out of range");
  }
  std::set<OperatorLabel> seen;
  elements_.reserve(labels_.size());
  for (const auto& label : labels_) {
    if (label.n_qubits() != n_qubits) {
      fail(ErrorKind::InvalidBasis, "label '" + label.str() + "' does not match n_qubits=" + std::to_string(n_qubits));
    }
    if (label.is_identity()) fail(ErrorKind::InvalidBasis, "the global identity is not a basis element");
    if (!seen.insert(label).second) fail(ErrorKind::InvalidBasis, "duplicate label '" + label.str() + "'");
    elements_.push_back(label.matrix());
  }
  if (metric_diagonal.size() == 0) {
    metric_ = RVector::Ones(distribution_size);
  } else {
    if (metric_diagonal.size() != distribution_size) {
      fail(ErrorKind::InvalidBasis, "metric diagonal must have one entry per distribution element");
    }
    if ((metric_diagonal.array() <= 0.0).any()) fail(ErrorKind::InvalidBasis, "metric must be positive definite");
    metric_ = std::move(metric_diagonal);
  }
}

int AlgebraBasis::index_of(const OperatorLabel& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

bool AlgebraBasis::identity_metric() const { return (metric_.array() == 1.0).all(); }

RVector AlgebraBasis::coefficients(const CMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) fail(ErrorKind::Dimension, "operator dimension does not match basis");
  RVector c(size());
  for (int j = 0; j < size(); ++j) c(j) = normalized_trace_product(x, elements_[static_cast<std::size_t>(j)]).real();
  return c;
}

CMatrix AlgebraBasis::combine(std::span<const double> c) const {
  if (c.size() > labels_.size()) fail(ErrorKind::Dimension, "too many coefficients for basis");
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (std::size_t j = 0; j < c.size(); ++j) out += c[j] * elements_[j];
  return out;
}

AlgebraBasis build_basis(int n_qubits, const std::vector<OperatorLabel>& distribution,
                         const std::vector<OperatorLabel>& extra) {
  std::vector<OperatorLabel> labels = distribution;
  labels.insert(labels.end(), extra.begin(), extra.end());
  return AlgebraBasis(n_qubits, std::move(labels), static_cast<int>(distribution.size()));
}

namespace {

std::vector<OperatorLabel> to_labels(const std::vector<std::string>& raw) {
  std::vector<OperatorLabel> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.emplace_back(s);
  return out;
}

}  // namespace

AlgebraBasis build_basis(int n_qubits, const std::vector<std::string>& distribution,
                         const std::vector<std::string>& extra) {
  return build_basis(n_qubits, to_labels(distribution), to_labels(extra));
}

AlgebraBasis close_algebra(const std::vector<OperatorLabel>& distribution, const std::vector<OperatorLabel>& drift) {
  if (distribution.empty()) fail(ErrorKind::InvalidBasis, "distribution must not be empty");
  const int n = distribution.front().n_qubits();
  std::vector<OperatorLabel> members;
  std::set<OperatorLabel> seen;
  auto add = [&](const OperatorLabel& l) {
    if (l.n_qubits() != n) fail(ErrorKind::InvalidBasis, "labels span different qubit counts");
    if (!l.is_identity() && seen.insert(l).second) members.push_back(l);
  };
  for (const auto& l : distribution) add(l);
  for (const auto& l : drift) add(l);

  // [P, Q] = 2 P Q when P and Q anticommute, zero otherwise, so closure
  // reduces to label arithmetic. Only pairs involving a new element need checking.
  std::size_t checked = 0;
  while (checked < members.size()) {
    const std::size_t frontier = members.size();
    for (std::size_t i = checked; i < frontier; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (members[i].anticommutes_with(members[j])) add(members[i].product_label(members[j]));
      }
    }
    checked = frontier;
  }

  std::set<OperatorLabel> dist_set(distribution.begin(), distribution.end());
  std::vector<OperatorLabel> complement;
  for (const auto& l : members) {
    if (!dist_set.contains(l)) complement.push_back(l);
  }
  std::sort(complement.begin(), complement.end());
  return build_basis(n, distribution, complement);
}

AlgebraBasis close_algebra(const std::vector<std::string>& distribution, const std::vector<std::string>& drift) {
  return close_algebra(to_labels(distribution), to_labels(drift));
}

CMatrix project_distribution(const CMatrix& x, const AlgebraBasis& basis) {
  if (x.rows() != basis.dim() || x.cols() != basis.dim()) {
    fail(ErrorKind::Dimension, "project_distribution: operator dimension does not match basis");
  }
  CMatrix out = CMatrix::Zero(basis.dim(), basis.dim());
  const RVector& g = basis.metric_diagonal();
  for (int j = 0; j < basis.distribution_size(); ++j) {
    out += g(j) * normalized_trace_product(x, basis.element(j)) * basis.element(j);
  }
  return out;
}

double inner(const CMatrix& x, const CMatrix& y, const AlgebraBasis& basis) {
  const int d = basis.distribution_size();
  auto components = [&](const CMatrix& a) {
    const RVector c = basis.coefficients(a).head(d);
    const CMatrix residual = a - basis.combine(c);
    if (residual.norm() > 1e-10 * std::max(1.0, a.norm())) {
      fail(ErrorKind::Domain, "inner: operator has components outside the distribution");
    }
    return c;
  };
  const RVector cx = components(x);
  const RVector cy = components(y);
  return cx.dot(basis.metric_diagonal().cwiseProduct(cy));
}

bool CoefficientExtraction::representable() const { return residual <= kRepresentabilityTolerance; }

CoefficientExtraction log_coefficients(const CMatrix& u, double tau, const AlgebraBasis& basis) {
  if (!(tau > 0.0)) fail(ErrorKind::Domain, "extract_coefficients: tau must be positive");
  if (u.rows() != basis.dim() || u.cols() != basis.dim()) {
    fail(ErrorKind::Dimension, "extract_coefficients: unitary dimension does not match basis");
  }
  if (unitarity_residual(u) > 1e-8) fail(ErrorKind::Domain, "extract_coefficients: matrix is not unitary");
  CMatrix generator = (kI / tau) * logm_unitary(u);
  // The trace part is a global phase; targets are defined up to one.
  generator.diagonal().array() -= normalized_trace(generator);
  generator = 0.5 * (generator + generator.adjoint()).eval();
  CoefficientExtraction out;
  out.c = basis.coefficients(generator);
  out.residual = (generator - basis.combine(out.c)).norm();
  return out;
}

RVector extract_coefficients(const CMatrix& u, double tau, const AlgebraBasis& basis) {
  CoefficientExtraction ex = log_coefficients(u, tau, basis);
  if (!ex.representable()) {
    fail(ErrorKind::NotRepresentable,
         "log U has components outside the algebra (residual " + std::to_string(ex.residual) + ")");
  }
  return std::move(ex.c);
}

}  // namespace geoctl
