#pragma once

// Error taxonomy shared by the library and the CLI.
//
// std::invalid_argument is used for precondition violations on in-memory
// values; the types below distinguish failures that need different exit
// codes or messages at the tool level.

#include <stdexcept>
#include <string>

namespace vrig {

// Malformed external input: rig configs, scene files, images, warp maps.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failure: missing file, unwritable path, short read.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Unrecoverable optimizer state (e.g. covariance not positive-definite
// even after jitter).
class OptimizerFailure : public std::runtime_error {
 public:
  explicit OptimizerFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vrig
