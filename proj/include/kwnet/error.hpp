#pragma once

#include <stdexcept>

namespace kwnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable inputs, unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or user-supplied parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation undefined on the given graph (e.g. modularity with no edges).
class GraphError : public Error {
 public:
  using Error::Error;
};

}  // namespace kwnet
