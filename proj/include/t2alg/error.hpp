#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace t2alg {

enum class ErrorKind {
  invalid_resolution,
  out_of_range,
  invalid_interval,
  invalid_generator,
  invalid_boundary,
  spec_violation,
  missing_block,
  invalid_neutral,
  grid_mismatch,
  closure,
  parse,
  suite_rejected,
  invalid_config,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_resolution: return "invalid-resolution";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::invalid_interval: return "invalid-interval";
    case ErrorKind::invalid_generator: return "invalid-generator";
    case ErrorKind::invalid_boundary: return "invalid-boundary";
    case ErrorKind::spec_violation: return "spec-violation";
    case ErrorKind::missing_block: return "missing-block";
    case ErrorKind::invalid_neutral: return "invalid-neutral";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::closure: return "closure";
    case ErrorKind::parse: return "parse";
    case ErrorKind::suite_rejected: return "suite-rejected";
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace t2alg
