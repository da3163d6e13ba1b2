#ifndef UNACC_ERROR_H_
#define UNACC_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unacc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bad configuration detected before any work starts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An external scorer violated the line protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace unacc

#endif  // UNACC_ERROR_H_
