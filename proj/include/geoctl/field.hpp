#pragma once

#include <string>
#include <vector>

#include "geoctl/linalg.hpp"

namespace geoctl {

/// Control amplitudes h^j(t_k) on the uniform grid t_k = k tau / N, k = 0..N.
/// Rows are grid points, columns the d distribution directions. Units hbar/tau.
struct ControlField {
  double tau = 1.0;
  RMatrix values;  // (N+1) x d

  ControlField() = default;
  ControlField(double tau_, RMatrix values_);
  static ControlField zeros(double tau, int steps, int components);

  int steps() const { return static_cast<int>(values.rows()) - 1; }
  int components() const { return static_cast<int>(values.cols()); }
  double dt() const { return tau / steps(); }
  double time(int k) const { return k * dt(); }

  /// Linear interpolation of every component at time t in [0, tau].
  RVector at(double t) const;

  void validate() const;
};

}  // namespace geoctl
