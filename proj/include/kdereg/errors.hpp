#pragma once

#include <stdexcept>
#include <string>

namespace kdereg {

/// Raised when an input file cannot be read or parsed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a solver or estimator is handed numerically degenerate data
/// (underdetermined systems, all-zero weights, collinear correspondences).
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kdereg
