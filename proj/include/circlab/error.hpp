#pragma once

#include <stdexcept>
#include <string>

namespace circlab {

enum class ErrorKind { parse, precondition, horizon, certification };

// Base for every error raised by circlab. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

// A query needed data beyond a declared horizon (set horizon, digit prefix, scan limit).
class HorizonExceeded : public Error {
 public:
  explicit HorizonExceeded(const std::string& what) : Error(ErrorKind::horizon, what) {}
};

class CertificationFailure : public Error {
 public:
  explicit CertificationFailure(const std::string& what) : Error(ErrorKind::certification, what) {}
};

int exit_code_for(ErrorKind kind) noexcept;

}  // namespace circlab
