#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vweb {

enum class ErrorKind {
  ZeroDenominator,
  JetInDenominator,
  EssentialDependence,
  PoleRemains,
  ChartMismatch,
  DegenerateSpectrum,
  UnknownPde,
  DependentFields,
  MalformedSystem,
  SingularChange,
  BoundaryNode,
  ShapeMismatch,
  CharacteristicEscape,
  SmallDenominator,
  EvaluationDomain,
  SyntaxError,
  UnknownIdentifier,
  TranscendentalInSymbolicContext,
  InvalidArgument,
};

std::string_view to_string(ErrorKind k) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Lowest surviving negative power after premultiplication.
class PoleRemains : public Error {
 public:
  PoleRemains(int order, const std::string& what);
  int order() const noexcept { return order_; }

 private:
  int order_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& what);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace vweb
