#pragma once

#include <stdexcept>
#include <string>

namespace genrob {

/// Input violates a documented precondition (empty trajectory, bad dimensions, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (eigen-solver non-convergence, singular factorization).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The mass matrix is not positive definite at the requested state.
class SingularMassMatrix : public NumericFailure {
 public:
  SingularMassMatrix(const std::string& what, double lambda_min)
      : NumericFailure(what), lambda_min_(lambda_min) {}
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

/// A chain description falls outside the supported class.
class UnsupportedChain : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// An invariant that holds by theorem was violated; indicates a bug.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace genrob
