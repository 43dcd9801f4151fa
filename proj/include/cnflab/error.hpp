#pragma once

#include <stdexcept>
#include <string>

namespace cnflab {

// Base of every domain error the library raises. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidClause : public Error {
public:
  using Error::Error;
};

class MalformedSignature : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Argument outside the supported domain (n < 3, n too large, m out of range, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
};

class CatalogError : public Error {
public:
  using Error::Error;
};

} // namespace cnflab
