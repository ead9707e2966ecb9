#pragma once

#include <stdexcept>
#include <string>

namespace omt {

// Caller-side mistakes: bad arguments, bad configuration, mismatched dimensions.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed or inconsistent input data (stream files, snapshots).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: singular system, non-finite result.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace omt
