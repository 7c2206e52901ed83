#ifndef LOGCAVE_ERRORS_HPP
#define LOGCAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace logcave {

// Raised when no log-concave maximum-likelihood density exists for the
// given input: either the target law has no finite first absolute moment
// (the likelihood functional is -inf everywhere), or all mass sits on a
// single point (the likelihood is unbounded above).
class ExistenceError : public std::runtime_error {
public:
  enum class Kind { InfiniteFirstMoment, DegenerateSupport };

  ExistenceError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// Raised when an iterative solver exhausts its iteration budget without
// meeting its convergence tolerance. Never returned silently as a result.
class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

private:
  int iterations_;
  double residual_;
};

// Input-file parse failure with a 1-based line number for diagnostics.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what), line_(line) {}

  long line() const { return line_; }

private:
  long line_;
};

}  // namespace logcave

#endif
