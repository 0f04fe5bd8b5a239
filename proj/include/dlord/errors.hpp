#pragma once

#include <stdexcept>
#include <string>

namespace dlord {

// Bad shapes, out-of-range indices, or otherwise malformed arguments,
// detected before any computation runs.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed external file (JSON / CSV); message carries line or field context.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File parsed but violates a structural contract (marker counts, label gaps).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required (loss blow-up, failed
// finite-difference probe).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Version mismatch, checksum failure, or wrong stage tag in a checkpoint.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coincident pelvis markers make the facing direction undefined.
struct DegeneratePose : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoints built against different architectures cannot be combined.
struct IncompatibleModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dlord
