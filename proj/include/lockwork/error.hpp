#pragma once

#include <stdexcept>
#include <string>

namespace lockwork {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed BENCH text or an invalid netlist construction.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Operation called outside its domain (missing key bits, wrong arity, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Critical-gate search found no gate passing the purity test.
class CgNotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace lockwork
