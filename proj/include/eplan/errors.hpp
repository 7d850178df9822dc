#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eplan {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the formula and domain-file parsers. `position` is the 1-based
// character position in the parsed text; `line` is 1-based and 0 when the
// input is treated as a single line.
struct SyntaxError : Error {
  SyntaxError(const std::string& message, std::size_t position, std::size_t line = 0)
      : Error(message), position(position), line(line) {}
  std::size_t position;
  std::size_t line;
};

struct IndexError : Error {
  using Error::Error;
};

struct UnknownActionError : Error {
  using Error::Error;
};

struct UndeclaredNameError : Error {
  using Error::Error;
};

struct NonPropositionalEffectError : Error {
  using Error::Error;
};

struct MoralityOutOfRangeError : Error {
  using Error::Error;
};

struct MismatchedContextError : Error {
  using Error::Error;
};

struct BaseMismatchError : Error {
  using Error::Error;
};

struct UniverseTooLargeError : Error {
  using Error::Error;
};

}  // namespace eplan
