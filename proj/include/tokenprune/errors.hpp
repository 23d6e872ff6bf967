#pragma once

#include <stdexcept>

namespace tokenprune {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened for reading.
struct FileNotFoundError : Error { using Error::Error; };

// Bytes on disk do not form a supported npy v1.0 file.
struct MalformedHeaderError : Error { using Error::Error; };

// Tensor rank differs from what the caller requested.
struct WrongRankError : Error { using Error::Error; };

// NaN or Inf encountered where finite values are required.
struct NonFiniteError : Error { using Error::Error; };

// Output path cannot be created or written.
struct UnwritablePathError : Error { using Error::Error; };

// Tensor shapes are inconsistent with each other.
struct ShapeMismatchError : Error { using Error::Error; };

// A precondition on an argument was violated (k > N, s = 0, reps < 3, ...).
struct InvalidArgumentError : Error { using Error::Error; };

// Contents violate a domain invariant (row sums, value ranges, index bounds).
struct ValidationError : Error { using Error::Error; };

}  // namespace tokenprune
