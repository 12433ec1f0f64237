#pragma once

#include <stdexcept>
#include <string>

namespace swarmlab {

// Base of every error thrown at the library boundary.
class SwarmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite coordinates or angles handed to a value type.
class ConstructionError : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

class NoIntersection : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

// Vicsek resultant vector is (numerically) zero.
class DegenerateAverage : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

// Negative entries or row sums away from 1.  Carries the worst row deviation.
class InvalidWeights : public SwarmError {
 public:
  InvalidWeights(const std::string& what, double max_row_deviation)
      : SwarmError(what), max_row_deviation_(max_row_deviation) {}
  double max_row_deviation() const noexcept { return max_row_deviation_; }

 private:
  double max_row_deviation_;
};

class IsolatedNode : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

class NoNeighbours : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

class PreconditionError : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

class NumericalFailure : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

// A scenario that cannot be simulated (disconnected start, bad headings, ...).
class ScenarioError : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

// Scenario document does not match the schema.  `field` is a JSON-pointer-ish path.
class SchemaError : public SwarmError {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : SwarmError(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace swarmlab
