#include "geoctl/field.hpp"

#include <algorithm>
#include <cmath>

#include "geoctl/error.hpp"

namespace geoctl {

ControlField::ControlField(double tau_, RMatrix values_) : tau(tau_), values(std::move(values_)) { validate(); }

ControlField ControlField::zeros(double tau, int steps, int components) {
  return ControlField(tau, RMatrix::Zero(steps + 1, components));
}

RVector ControlField::at(double t) const {
  const double x = std::clamp(t / dt(), 0.0, static_cast<double>(steps()));
  const int k = std::min(static_cast<int>(x), steps() - 1);
  const double frac = x - k;
  return (1.0 - frac) * values.row(k).transpose() + frac * values.row(k + 1).transpose();
}

void ControlField::validate() const {
  if (!(tau > 0.0)) fail(ErrorKind::Validation, "control field: tau must be positive");
  if (values.rows() < 2) fail(ErrorKind::Validation, "control field: need at least two grid points");
  if (!values.allFinite()) fail(ErrorKind::Validation, "control field: non-finite amplitude");
}

}  // namespace geoctl
