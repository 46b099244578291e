#include "vweb/errors.hpp"

namespace vweb {

std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::JetInDenominator: return "JetInDenominator";
    case ErrorKind::EssentialDependence: return "EssentialDependence";
    case ErrorKind::PoleRemains: return "PoleRemains";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::UnknownPde: return "UnknownPde";
    case ErrorKind::DependentFields: return "DependentFields";
    case ErrorKind::MalformedSystem: return "MalformedSystem";
    case ErrorKind::SingularChange: return "SingularChange";
    case ErrorKind::BoundaryNode: return "BoundaryNode";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::CharacteristicEscape: return "CharacteristicEscape";
    case ErrorKind::SmallDenominator: return "SmallDenominator";
    case ErrorKind::EvaluationDomain: return "EvaluationDomain";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::TranscendentalInSymbolicContext: return "TranscendentalInSymbolicContext";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

PoleRemains::PoleRemains(int order, const std::string& what)
    : Error(ErrorKind::PoleRemains, what), order_(order) {}

SyntaxError::SyntaxError(int line, int column, const std::string& what)
    : Error(ErrorKind::SyntaxError,
            std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace vweb
