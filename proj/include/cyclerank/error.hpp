#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclerank {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when the error is not tied
// to a particular line (e.g. a missing header at end of input).
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class NotFoundError : public Error {
public:
  NotFoundError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

// Raised from inside a kernel when its stop token fires.
class Cancelled : public Error {
public:
  Cancelled() : Error("cancelled") {}
};

}  // namespace cyclerank
