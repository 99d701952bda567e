#ifndef TARSKI_ERRORS_HPP
#define TARSKI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tarski {

/// Caller violated a precondition (dimension mismatch, out-of-box query, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The instance breaks the monotone / range conditions, detected at run time.
class InstanceInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver broke its own contract (e.g. the outer solver of a decomposition
/// returned without querying its answer).
class SolverContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or invalid instance document.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tarski

#endif  // TARSKI_ERRORS_HPP
