#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shadowlab {

enum class ErrorKind {
  DimensionMismatch,
  ZeroDirection,
  SingularMatrix,
  NotContractive,
  SeedNotInvariant,
  SeedNotTight,
  LetterOutOfRange,
  BudgetExceeded,
  TooManyComponents,
  InvalidWitness,
  ParamOutOfRange,
  NoValidCornerCount,
  DegenerateSimplex,
  ImagesOverlap,
  DegenerateInput,
  NotConvex,
  NonSummableEpsilons,
  TooFewScales,
  UnsupportedDimension,
  Parse,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the library.  `kind()` is stable and
/// appears verbatim in machine-readable CLI errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace shadowlab
