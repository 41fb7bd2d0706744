#pragma once

#include <stdexcept>

namespace chainlab {

// Base class for every error thrown by this library.
struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input fails structural validation (shape, entry range, row sums, masses).
struct ValidationError : ChainError {
  using ChainError::ChainError;
};

// Operands have incompatible dimensions.
struct DimensionError : ChainError {
  using ChainError::ChainError;
};

// Transition support graph is not strongly connected.
struct IrreducibilityError : ChainError {
  using ChainError::ChainError;
};

// A state carries no stationary mass or a quota degenerates.
struct DegenerateStateError : ChainError {
  using ChainError::ChainError;
};

// A linear solve or post-solve residual check failed.
struct NumericalError : ChainError {
  using ChainError::ChainError;
};

// A truncated series cannot meet the requested mass bound.
struct TruncationError : ChainError {
  using ChainError::ChainError;
};

// An iteration exhausted its horizon without meeting its target.
struct ConvergenceError : ChainError {
  using ChainError::ChainError;
};

// Holding probabilities violate the preconditions of a bound.
struct HoldingProbabilityError : ChainError {
  using ChainError::ChainError;
};

// Problem size exceeds the cutoff of an exact enumeration routine.
struct ScaleError : ChainError {
  using ChainError::ChainError;
};

// Malformed external input (chain spec files, CLI arguments).
struct ParseError : ChainError {
  using ChainError::ChainError;
};

}  // namespace chainlab
