#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cqed {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (matrices, documents).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::string what, std::size_t line, std::size_t column)
      : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Device-document schema violation; `path()` is a JSON pointer to the offending node.
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string path, const std::string& what)
      : ValidationError(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double worst_residual)
      : Error(what + " (worst residual " + std::to_string(worst_residual) + ")"), worst_residual_(worst_residual) {}

  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

/// Charge-basis cutoff could not be grown far enough to converge the spectrum.
class CutoffError : public Error {
 public:
  using Error::Error;
};

class ReductionError : public Error {
 public:
  using Error::Error;
};

/// Qubit and resonator (or the 1-2 transition) too close for a dispersive expansion.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A dressed state could not be matched to a bare state with overlap >= 1/2.
class LabelingError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double lo, double hi)
      : Error(what + " [bracket " + std::to_string(lo) + ", " + std::to_string(hi) + "]"), lo_(lo), hi_(hi) {}

  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Element-level failure inside the analysis pipeline, tagged with the element name.
class AnalysisError : public Error {
 public:
  AnalysisError(std::string element, const std::string& what)
      : Error(element + ": " + what), element_(std::move(element)) {}

  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

}  // namespace cqed
