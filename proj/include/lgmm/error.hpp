#pragma once

#include <stdexcept>
#include <string>

namespace lgmm {

enum class ErrorKind {
  invalid_argument,
  degenerate_mesh,
  overlap_detected,
  no_convergence,
  asymmetric_system,
  out_of_domain,
  mismatched_levels,
  missing_history,
  zero_denominator,
  config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::degenerate_mesh: return "degenerate-mesh";
    case ErrorKind::overlap_detected: return "overlap-detected";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::asymmetric_system: return "asymmetry-detected";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::mismatched_levels: return "mismatched-levels";
    case ErrorKind::missing_history: return "missing-history";
    case ErrorKind::zero_denominator: return "zero-denominator";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerics (overlap, solver) as opposed to bad input.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::overlap_detected || kind_ == ErrorKind::no_convergence ||
           kind_ == ErrorKind::degenerate_mesh || kind_ == ErrorKind::asymmetric_system;
  }

 private:
  ErrorKind kind_;
};

}  // namespace lgmm
