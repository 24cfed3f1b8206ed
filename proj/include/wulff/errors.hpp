#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

/// Invalid input: malformed geometry, violated preconditions, bad files.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed (non-convergence, empty discrete sets).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested discretization would exceed the resource budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wulff
