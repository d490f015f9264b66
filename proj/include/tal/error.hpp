#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tal {

/// Base class of every error the library raises.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad argument, wrong alphabet,
/// unsupported operator, ...).
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Malformed formula source. Line and column are 1-based.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// A configured resource budget (semigroup elements, automaton states,
/// channel width) was exhausted.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent input file (DFA JSON, model JSON, dataset JSONL).
class FormatError : public Error {
  public:
    using Error::Error;
};

}  // namespace tal
