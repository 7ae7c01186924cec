#pragma once

#include <stdexcept>
#include <string>

namespace bilqctrl {

// Invalid argument or violated invariant. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. Carries the parser message, including line/column.
class ParseError : public ValidationError {
 public:
  explicit ParseError(const std::string& what) : ValidationError(what) {}
};

// Filesystem failure. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bilqctrl
