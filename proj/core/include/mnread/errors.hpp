#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mnread {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; `line()` is 1-based, 0 when not line-specific.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class MixedArityError : public ArityError {
 public:
  using ArityError::ArityError;
};

class TokenizationError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

class TransportError : public ScoringError {
 public:
  using ScoringError::ScoringError;
};

class ProtocolError : public ScoringError {
 public:
  using ScoringError::ScoringError;
};

/// A structural invariant was found broken at run time.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace mnread
