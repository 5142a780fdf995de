#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qgraph/types.hpp"

namespace qgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, dangling ids, bad arguments.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A well-formed object violates an admissibility rule (rank, self-adjointness, ...).
class InvariantViolation : public Error {
public:
  explicit InvariantViolation(const std::string& what, int vertex = -1) : Error(what), vertex_(vertex) {}
  /// Offending vertex id, -1 when not tied to a vertex.
  int vertex() const noexcept { return vertex_; }

private:
  int vertex_;
};

/// Text input could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Base for numerical exceptions raised at a specific spectral point.
class NumericalException : public Error {
public:
  NumericalException(const std::string& what, cplx lambda, double sigma_min)
      : Error(what), lambda_(lambda), sigma_min_(sigma_min) {}
  cplx lambda() const noexcept { return lambda_; }
  double sigma_min() const noexcept { return sigma_min_; }

private:
  cplx lambda_;
  double sigma_min_;
};

/// The interior Dirichlet system is (numerically) singular: lambda sits on sigma(H0).
class NearSingular : public NumericalException {
public:
  NearSingular(cplx lambda, double sigma_min);
};

/// The lead Robin matrix k I + i Lambda is singular: a point of the exceptional set.
class ContinuationPole : public NumericalException {
public:
  ContinuationPole(cplx lambda, double sigma_min);
};

/// lambda is on the branch cut (-inf, 0] or inside the threshold floor.
class ThresholdExcluded : public NumericalException {
public:
  explicit ThresholdExcluded(cplx lambda);
};

/// A sweep window contains exceptional points and exclusion was not requested.
class ExceptionalWindow : public Error {
public:
  ExceptionalWindow(const std::string& what, std::vector<double> offenders)
      : Error(what), offenders_(std::move(offenders)) {}
  const std::vector<double>& offenders() const noexcept { return offenders_; }

private:
  std::vector<double> offenders_;
};

}  // namespace qgraph
