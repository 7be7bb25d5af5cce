#pragma once

#include <stdexcept>
#include <string>

namespace nearconvex {

enum class ErrorKind {
  Usage,
  DimensionMismatch,
  DimensionCap,
  EmptyPolyhedron,
  PointNotInSet,
  PointNotInGraph,
  NotNearlyConvex,
  EmptyDomain,
  ValueNotFinite,
  ImproperObjective,
  ImproperPerturbation,
  VerticalInvariant,
  EmptySolutionMap,
  QCViolated,
  UnknownTheorem,
  Parse,
};

const char* error_kind_name(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "UsageError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionCap: return "DimensionCapExceeded";
    case ErrorKind::EmptyPolyhedron: return "EmptyPolyhedron";
    case ErrorKind::PointNotInSet: return "PointNotInSet";
    case ErrorKind::PointNotInGraph: return "PointNotInGraph";
    case ErrorKind::NotNearlyConvex: return "NotNearlyConvex";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::ValueNotFinite: return "ValueNotFinite";
    case ErrorKind::ImproperObjective: return "ImproperObjective";
    case ErrorKind::ImproperPerturbation: return "ImproperPerturbation";
    case ErrorKind::VerticalInvariant: return "VerticalInvariantViolated";
    case ErrorKind::EmptySolutionMap: return "EmptySolutionMap";
    case ErrorKind::QCViolated: return "QCViolated";
    case ErrorKind::UnknownTheorem: return "UnknownTheorem";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

inline void require_dim(std::size_t got, std::size_t expected, const char* what) {
  if (got != expected) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(expected) +
                    ", got " + std::to_string(got));
  }
}

}  // namespace nearconvex
