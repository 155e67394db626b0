#pragma once

#include <stdexcept>
#include <string>

namespace myo {

// Bad parameters or flags (CLI exit code 1).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or insufficient input data (CLI exit code 2).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: singular matrices, non-convergence (CLI exit code 3).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace myo
