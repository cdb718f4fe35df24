#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edwsax {

//! Base class of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Word length w outside [1, n] for the series it is applied to.
class InvalidWordLength : public Error {
 public:
  using Error::Error;
};

//! Alphabet size outside [2, 256], or breakpoints that do not match one.
class InvalidAlphabet : public Error {
 public:
  using Error::Error;
};

//! Reconstruction length that cannot host the given word.
class InvalidLength : public Error {
 public:
  using Error::Error;
};

//! Sample with zero range where a data-driven scale is required.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

//! The ISJ fixed-point iteration failed to converge.
class IsjConvergenceFailure : public Error {
 public:
  using Error::Error;
};

//! Two sequences that must have equal length do not.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

//! Two symbol words drawn from different alphabets.
class WordMismatch : public Error {
 public:
  using Error::Error;
};

//! Serialized model written by an unsupported format version.
class FormatVersionMismatch : public Error {
 public:
  using Error::Error;
};

//! Serialized model that is truncated or structurally invalid.
class CorruptModel : public Error {
 public:
  using Error::Error;
};

//! Input file with no data rows.
class EmptyFile : public Error {
 public:
  using Error::Error;
};

//! Too few non-zero paired differences for a signed-rank test.
class TooFewPairs : public Error {
 public:
  using Error::Error;
};

//! Malformed text input; carries the 1-based line and field position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " (line " + std::to_string(line) + ", field " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace edwsax
