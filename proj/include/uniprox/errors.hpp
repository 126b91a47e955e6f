#pragma once

#include <stdexcept>
#include <string>

namespace uniprox {

// Base class for all solver-originated failures.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative sub-solver failed to certify its target accuracy.
struct NonConvergence : SolverError {
  using SolverError::SolverError;
};

// A blackbox update produced output violating its own contract.
struct ContractViolation : SolverError {
  using SolverError::SolverError;
};

// Instance metadata required by a bound or checker is absent.
struct MissingMeta : SolverError {
  using SolverError::SolverError;
};

struct MissingDiameter : MissingMeta {
  using MissingMeta::MissingMeta;
};

// Arguments outside the mathematical domain of a formula.
struct DomainError : SolverError {
  using SolverError::SolverError;
};

// Invalid instance family specification.
struct BadSpec : SolverError {
  using SolverError::SolverError;
};

struct BudgetExhaustedError : SolverError {
  using SolverError::SolverError;
};

}  // namespace uniprox
