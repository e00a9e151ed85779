#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

// Precondition violations on values handed to the library.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but degenerate for the requested operation
// (parallel operators, all-zero policy rows, ...).
class DegenerateInput : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Malformed experiment configuration: unknown preset, unknown key, bad value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmem
