#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavelqg {

enum class ErrorCode {
  Domain,
  Symmetry,
  Convergence,
  NotStabilizable,
  Infeasible,
  Numeric,
  Instability,
  Internal,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class SymmetryError : public Error {
 public:
  explicit SymmetryError(const std::string& what) : Error(ErrorCode::Symmetry, what) {}
};

// Carries the residual norm after every Newton step so callers can tell
// stagnation from divergence.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residual_history)
      : Error(ErrorCode::Convergence, what), history_(std::move(residual_history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

class NotStabilizableError : public Error {
 public:
  explicit NotStabilizableError(const std::string& what) : Error(ErrorCode::NotStabilizable, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorCode::Infeasible, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorCode::Numeric, what) {}
};

class InstabilityError : public Error {
 public:
  explicit InstabilityError(const std::string& what) : Error(ErrorCode::Instability, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorCode::Internal, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::Parse, what) {}
};

}  // namespace wavelqg
