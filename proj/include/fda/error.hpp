#pragma once

#include <stdexcept>
#include <string>

namespace fda {

// Malformed or inconsistent input data (corpus files, CSVs, models).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration or command-line usage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fda
