#pragma once

#include <stdexcept>
#include <string>

namespace afcert {

enum class ErrorKind {
  SingularMatrix,
  AmbiguousModulus,
  DimMismatch,
  NoUnitEigenvalue,
  NonSemisimpleNeutral,
  UnitEigenvalue,
  ZeroVector,
  EmptySubspace,
  NotContracting,
  Overflow,
  NotHyperbolic,
  NotTransversal,
  NotMaximalIsotropic,
  DegenerateProjection,
  NotIsometry,
  NotRRegular,
  NeutralDimWrong,
  NotProductCompatible,
  EqualSubspaces,
  NotIsotropic,
  DegenerateSide,
  BallTooLarge,
  AxesIntersect,
  NoVerifiedN,
  UnsupportedGeometry,
  SignMismatch,
  BudgetExhausted,
  DegenerateAngle,
  UnknownDescriptor,
  ParseError,
  InvalidArgument,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace afcert
