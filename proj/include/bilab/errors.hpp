#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

namespace bilab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands built over different ProductRing layouts.
class LayoutError : public Error {
 public:
  using Error::Error;
};

class NonUnitError : public Error {
 public:
  NonUnitError(std::size_t component, const std::string& what)
      : Error(what), component_(component) {}

  std::size_t component() const { return component_; }

 private:
  std::size_t component_;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the set an operation is defined on (e.g. star_mul on a
// non-member of U, vhu_decompose outside Gamma_1).
class DomainError : public Error {
 public:
  using Error::Error;
};

class TooLargeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRingError : public Error {
 public:
  using Error::Error;
};

class BindingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Report file could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::set<std::string> expected,
             const std::string& found);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::set<std::string> expected_;
};

}  // namespace bilab
