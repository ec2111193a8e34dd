#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rill {

/// Root of every error thrown by the library. `kind()` names the error
/// class for the CLI's structured error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

#define RILL_DEFINE_ERROR(Name) \
  class Name : public Error {   \
   public:                      \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

RILL_DEFINE_ERROR(ArityError);
RILL_DEFINE_ERROR(ShapeError);
RILL_DEFINE_ERROR(DomainError);
RILL_DEFINE_ERROR(MissingAtomError);
RILL_DEFINE_ERROR(UnmappedPredicateError);
RILL_DEFINE_ERROR(DivergenceError);
RILL_DEFINE_ERROR(SeparabilityError);
RILL_DEFINE_ERROR(InsufficientDataError);
RILL_DEFINE_ERROR(FormatError);
RILL_DEFINE_ERROR(ConfigError);

#undef RILL_DEFINE_ERROR

}  // namespace rill
