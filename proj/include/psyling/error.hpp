#pragma once

#include <stdexcept>
#include <string>

namespace psyling {

enum class ErrorKind { config, data, numerical, shape, usage };

/// Base of every exception thrown by the library. The kind drives the CLI
/// exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad or inconsistent configuration: unmapped labels, missing resources.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Unreadable or malformed input data.
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

struct LoadError : DataError {
  explicit LoadError(const std::string& what) : DataError("load error: " + what) {}
};

struct FormatError : DataError {
  explicit FormatError(const std::string& what) : DataError("format error: " + what) {}
};

/// Inputs paired by id that do not belong together.
struct PairingError : DataError {
  explicit PairingError(const std::string& what) : DataError("pairing error: " + what) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, "shape error: " + what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, "usage error: " + what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::usage:
      return 2;
    case ErrorKind::data:
    case ErrorKind::shape:
      return 3;
    case ErrorKind::numerical:
      return 4;
  }
  return 1;
}

}  // namespace psyling
