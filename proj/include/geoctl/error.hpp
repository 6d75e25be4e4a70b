#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoctl {

/// Broad failure classes. The CLI maps the first group to exit code 1
/// (bad input) and the second to exit code 2 (numerical failure).
enum class ErrorKind {
  // input / validation
  Dimension,
  InvalidBasis,
  Domain,
  Validation,
  Io,
  // numerical
  NotRepresentable,
  Singularity,
  StepSize,
  IntegratorAccuracy,
  Convergence,
  Numerical,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  bool is_numerical() const noexcept { return kind_ >= ErrorKind::NotRepresentable; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace geoctl
