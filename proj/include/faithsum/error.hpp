#pragma once

#include <stdexcept>
#include <string>

namespace faithsum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition (empty prompt, bad window, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Scoring backend failed: unreachable after retries, non-200, malformed body.
class BackendError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace faithsum
