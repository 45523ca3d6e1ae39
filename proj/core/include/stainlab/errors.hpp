#pragma once

#include <stdexcept>
#include <string>

namespace stainlab {

// Shape/extent disagreement between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mathematically unusable input: singular matrix, zero-norm vector,
// zero-variance series.
struct DegenerateInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A tissue class with zero probability mass; callers may fall back to a
// uniform prototype.
struct DegenerateClassError : DegenerateInputError {
    using DegenerateInputError::DegenerateInputError;
};

// Value-domain violation: non-finite features, probabilities outside (0,1).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mismatched series lengths when two datasets must align by image id.
struct AlignmentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite value produced while probing a function (gradient checks).
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Corrupt or unrecognized file content.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A requested key (stain name, tensor name) is absent.
struct LookupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem / decode failure, carries the offending path in the message.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stainlab
