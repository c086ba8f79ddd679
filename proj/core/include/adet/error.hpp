#pragma once

#include <stdexcept>
#include <string>

namespace adet {

enum class ErrorKind {
  InvalidParameter,
  Numeric,
  Construction,
  Accuracy,
  Inversion,
  InsufficientTrials,
  Config,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for everything thrown by the library. The kind selects the CLI
/// exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Quadrature that could not reach its tolerance. Carries the estimate anyway.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : Error(ErrorKind::Accuracy, what),
        estimate_(estimate),
        error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Config parse/schema error with a 1-based line number (0 when not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);

  int line() const noexcept { return line_; }

 private:
  int line_;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_numeric(const std::string& what);

}  // namespace adet
