#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wkmodal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A formula could not be evaluated (box under a matrix, unknown variable or world).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search would exceed its configured cap. Never a verdict.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Bad structured input: model, proof or algebra files.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wkmodal
