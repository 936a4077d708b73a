#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crs {

enum class Errc {
  // input / validation
  SyntaxError,
  UnknownIdentifier,
  IndexOutOfRange,
  UnboundParameter,
  InvalidArgument,
  SchemaError,
  NotOnSurface,
  InvalidDecomposition,
  NotOnSphereImage,
  NotApplicable,
  NegativeTransverseCurvature,
  NotRealValued,
  OrderExceeded,
  OrderMismatch,
  // numerical
  DivisionByZeroJet,
  LogOfNonpositive,
  DegenerateJ,
  NotStrictlyPseudoconvex,
  InternalConsistency,
  NoRootFound,
  DegenerateFrame,
  IllConditionedGram,
  CholeskyFailure,
  NoPositiveEigenvalue,
};

std::string_view to_string(Errc code);

/// True for errors caused by the input (exit code 2); false for numerical failures (exit code 3).
bool is_validation_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parser failure carrying the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace crs
