#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rkex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Serialized input (share, frame, envelope, state file) is malformed.
class DecodingError : public Error {
 public:
  using Error::Error;
};

/// The peer violated the wire protocol or the network failed.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A brute-force search would enumerate more candidates than allowed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, unsigned __int128 required)
      : Error(std::move(what)), required_(required) {}

  /// Candidate count the search would need; saturates at 2^128 - 1.
  unsigned __int128 required() const { return required_; }

 private:
  unsigned __int128 required_;
};

}  // namespace rkex
