#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levyx {

// Shared error taxonomy. Every failure raised by the library derives from
// Error so callers (notably the CLI) can map computation failures to a single
// exit path while still distinguishing the categories below.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument for a mathematical operation (out-of-domain input,
// dimension mismatch, invalid parameter set).
class DomainError : public Error {
public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& msg) : Error(msg), line_(0) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Structurally valid file whose contents violate the expected schema
// (wrong header, inconsistent dimensions, empty record section).
class SchemaError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Statistical estimation cannot proceed (too few records, degenerate
// variance, value outside the method's domain).
class EstimationError : public Error {
public:
  using Error::Error;
};

// Trajectory integration produced a non-finite state.
class SimulationError : public Error {
public:
  using Error::Error;
};

// Query refers to data that does not exist (e.g. unknown initial point).
class QueryError : public Error {
public:
  using Error::Error;
};

// Numerical quadrature failed to converge within the refinement budget.
class IntegrationError : public Error {
public:
  using Error::Error;
};

// Model evaluation produced a non-finite intermediate value.
class EvaluationError : public Error {
public:
  using Error::Error;
};

// Optimization failure (divergent loss, non-finite gradient).
class TrainingError : public Error {
public:
  using Error::Error;
};

}  // namespace levyx
