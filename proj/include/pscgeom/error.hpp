#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pscgeom {

enum class ErrorKind {
  InvalidParameter,
  DimensionError,
  TipSampling,
  EmptyBaseField,
  NotSimpleLink,
  NotNormalized,
  JunctionMismatch,
  SearchFailure,
  NonPositiveBase,
  ZeroATensor,
  SingularMetric,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to diagnostics without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace pscgeom
