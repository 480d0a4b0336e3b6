#include "pscgeom/error.hpp"

namespace pscgeom {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::TipSampling: return "TipSampling";
    case ErrorKind::EmptyBaseField: return "EmptyBaseField";
    case ErrorKind::NotSimpleLink: return "NotSimpleLink";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::JunctionMismatch: return "JunctionMismatch";
    case ErrorKind::SearchFailure: return "SearchFailure";
    case ErrorKind::NonPositiveBase: return "NonPositiveBase";
    case ErrorKind::ZeroATensor: return "ZeroATensor";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace pscgeom
