#include "crspectra/error.hpp"

namespace crs {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::UnboundParameter: return "UnboundParameter";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SchemaError: return "SchemaError";
    case Errc::NotOnSurface: return "NotOnSurface";
    case Errc::InvalidDecomposition: return "InvalidDecomposition";
    case Errc::NotOnSphereImage: return "NotOnSphereImage";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::NegativeTransverseCurvature: return "NegativeTransverseCurvature";
    case Errc::NotRealValued: return "NotRealValued";
    case Errc::OrderExceeded: return "OrderExceeded";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::DivisionByZeroJet: return "DivisionByZeroJet";
    case Errc::LogOfNonpositive: return "LogOfNonpositive";
    case Errc::DegenerateJ: return "DegenerateJ";
    case Errc::NotStrictlyPseudoconvex: return "NotStrictlyPseudoconvex";
    case Errc::InternalConsistency: return "InternalConsistency";
    case Errc::NoRootFound: return "NoRootFound";
    case Errc::DegenerateFrame: return "DegenerateFrame";
    case Errc::IllConditionedGram: return "IllConditionedGram";
    case Errc::CholeskyFailure: return "CholeskyFailure";
    case Errc::NoPositiveEigenvalue: return "NoPositiveEigenvalue";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) {
  switch (code) {
    case Errc::SyntaxError:
    case Errc::UnknownIdentifier:
    case Errc::IndexOutOfRange:
    case Errc::UnboundParameter:
    case Errc::InvalidArgument:
    case Errc::SchemaError:
    case Errc::NotOnSurface:
    case Errc::InvalidDecomposition:
    case Errc::NotOnSphereImage:
    case Errc::NotApplicable:
    case Errc::NegativeTransverseCurvature:
    case Errc::NotRealValued:
    case Errc::OrderExceeded:
    case Errc::OrderMismatch:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(Errc code, std::size_t offset, const std::string& what)
    : Error(code, what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

}  // namespace crs
