#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "geoctl/dephasing.hpp"
#include "geoctl/field.hpp"
#include "geoctl/lie.hpp"

namespace geoctl {

/// Initial co-state Lambda(0) as coefficients in the basis order.
struct CoState {
  RVector coefficients;

  CoState() = default;
  explicit CoState(RVector c) : coefficients(std::move(c)) {}
  CoState(std::initializer_list<double> c);

  int size() const { return static_cast<int>(coefficients.size()); }
  double norm() const { return coefficients.norm(); }
};

/// One uncontrolled term f(t) alpha_j with alpha_j in the distribution complement.
struct DriftTerm {
  int element = -1;
  std::function<double(double)> coefficient;
};

class DriftSpec {
 public:
  static DriftSpec none();
  /// f(t) sigma_z (x) sigma_z for each given system/auxiliary pair label
  /// ("zz" for the single noisy qubit), f from drift_coefficient.
  static DriftSpec dephasing(const NoiseParams& p, const AlgebraBasis& basis,
                             const std::vector<std::string>& labels = {"zz"});
  /// Constant pi / (2 tau) on the given label ("yy" for two coupled qubits).
  static DriftSpec crosstalk(double tau, const AlgebraBasis& basis, const std::string& label = "yy");
  static DriftSpec constant(double value, const AlgebraBasis& basis, const std::string& label);

  const std::string& kind() const { return kind_; }
  const std::vector<DriftTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  CMatrix hamiltonian(double t, const AlgebraBasis& basis) const;
  /// Every referenced element must lie outside the distribution.
  void validate(const AlgebraBasis& basis) const;

 private:
  std::string kind_ = "none";
  std::vector<DriftTerm> terms_;
};

/// A gate on the system qubits, embedded as U (x) I when the basis also
/// carries auxiliary qubits.
struct GateTarget {
  CMatrix system;
  CMatrix embedded;
  RVector c_target;
  /// c vectors of every e^{i phi} U inside the group: the system gate's
  /// determinant normalized to one, times each root of unity of its dimension.
  /// Fidelity cannot tell these apart, but their principal logs differ.
  std::vector<RVector> c_equivalent;
  double tau = 1.0;

  static GateTarget make(const CMatrix& system_unitary, const AlgebraBasis& basis, double tau);
};

/// |ntr(U^dagger T)|^2 in [0, 1]; infidelity is 1 minus this.
double fidelity(const CMatrix& u, const CMatrix& embedded_target);
inline double fidelity(const CMatrix& u, const GateTarget& target) { return fidelity(u, target.embedded); }

struct EnergyResult {
  double value = 0.0;
  /// True when N was odd and the trapezoid rule replaced Simpson's.
  bool trapezoid_fallback = false;
};

/// (1/2) int_0^tau sum_j g_jj h_j(t)^2 dt, units hbar^2/tau.
EnergyResult energy(const ControlField& field, const RVector& metric_diagonal);
/// Per-grid-point integrand (1/2) <H_c, H_c>.
RVector energy_density(const ControlField& field, const RVector& metric_diagonal);

struct GeodesicSolution {
  CoState costate;
  CMatrix final_unitary;
  std::vector<double> fidelity;  // F(t_k), empty without a target
  ControlField field;
  double energy = 0.0;
  bool energy_trapezoid = false;
  double infidelity = 1.0;
  double max_unitarity_residual = 0.0;
};

/// Integrates dU/dt = -i [H_drift(t) + P_Delta(U Lambda0 U^dagger)] U from U(0) = I
/// with classical RK4 and a unitary projection after every step. Co-state
/// transport Lambda(t) = U Lambda0 U^dagger solves i dLambda/dt = [H, Lambda].
/// Holds the tabulated drift, so one instance serves many co-states; const
/// member functions are safe to call concurrently.
class GeodesicShooter {
 public:
  GeodesicShooter(const AlgebraBasis& basis, const DriftSpec& drift, double tau, int steps);
  ~GeodesicShooter();
  GeodesicShooter(GeodesicShooter&&) noexcept;
  GeodesicShooter& operator=(GeodesicShooter&&) noexcept;

  const AlgebraBasis& basis() const;
  double tau() const;
  int steps() const;

  CMatrix final_unitary(const CoState& costate) const;
  double infidelity(const CoState& costate, const GateTarget& target) const;
  GeodesicSolution solve(const CoState& costate, const GateTarget* target = nullptr) const;
  /// U(t_k) at every grid point.
  std::vector<CMatrix> trajectory(const CoState& costate) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GeodesicSolution integrate_geodesic(const CoState& costate, const DriftSpec& drift, const AlgebraBasis& basis,
                                    double tau, int steps, const GateTarget* target = nullptr);

/// Time-ordered midpoint-exponential propagation of a field plus drift;
/// returns U(t_k), k = 0..N.
std::vector<CMatrix> propagate_fields(const ControlField& field, const DriftSpec& drift, const AlgebraBasis& basis);

struct Classification {
  enum class Kind { GlobalCandidate, Overshoot };
  Kind kind = Kind::GlobalCandidate;
  int overshoots = 0;

  std::string str() const;
  bool global() const { return kind == Kind::GlobalCandidate; }
  static Classification parse(const std::string& s);
};

inline constexpr double kDefaultOvershootEpsilon = 0.05;

/// Counts interior fidelity maxima above 1 - epsilon. Refuses traces whose
/// final infidelity exceeds 1e-6.
Classification classify_trajectory(std::span<const double> fidelity, double epsilon = kDefaultOvershootEpsilon);

}  // namespace geoctl
