// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MVBC_ERROR_HPP
#define MVBC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mvbc {

  /// Base of every error thrown by the library.
  class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Invalid (n, t, L, D, c) combination or scenario.
  class ConfigError : public Error {
  public:
    using Error::Error;
  };

  /// API misuse: mismatched lengths, foreign field elements, self-loops.
  class UsageError : public Error {
  public:
    using Error::Error;
  };

  /// Arithmetic outside the operation's domain (inverse of zero).
  class DomainError : public Error {
  public:
    using Error::Error;
  };

  /// Fewer than k known symbols in a partial view.
  class InsufficientInformation : public Error {
  public:
    using Error::Error;
  };

  /// Known symbols of a partial view lie on no codeword.
  class Inconsistency : public Error {
  public:
    using Error::Error;
  };

  /// Malformed scenario or transcript file.
  class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
  };

  /// A protocol invariant was observed to fail at runtime.
  class InvariantViolation : public Error {
  public:
    using Error::Error;
  };

}  // namespace mvbc

#endif  // MVBC_ERROR_HPP
