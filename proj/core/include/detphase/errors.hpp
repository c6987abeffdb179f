#pragma once

#include <stdexcept>
#include <string>

namespace detphase {

/// Broad classes of failure; the CLI maps them onto exit codes.
enum class ErrorKind {
  domain,          // input outside the mathematical domain (e.g. log of zero)
  cut_collision,   // eigenvalue on the spectral cut
  non_invertible,  // eigenvalue at the origin
  precondition,    // theorem or operation hypotheses violated
  integration,     // ODE integrator produced non-finite values
  contour,         // argument-principle contour passes through a root
  convergence,     // Newton or eigensolver failed to converge
  bandwidth,       // Galerkin cutoff too small for the coefficient bandwidth
  undersampled,    // sample spacing too coarse for phase unwrapping
  model,           // a structural model property (symmetry, matching) failed
  regime,          // parameter outside the verified regime
  parse,           // malformed input document
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// True for failures of numerical machinery rather than of the caller's input.
inline bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::integration:
    case ErrorKind::contour:
    case ErrorKind::convergence:
    case ErrorKind::undersampled:
    case ErrorKind::model:
      return true;
    default:
      return false;
  }
}

}  // namespace detphase
