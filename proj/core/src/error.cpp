#include "adet/error.hpp"

namespace adet {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Construction: return "construction";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::Inversion: return "inversion";
    case ErrorKind::InsufficientTrials: return "insufficient-trials";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

static std::string format_config_message(const std::string& source, int line,
                                         const std::string& message) {
  if (line > 0) return source + ":" + std::to_string(line) + ": " + message;
  return source + ": " + message;
}

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : Error(ErrorKind::Config, format_config_message(source, line, message)), line_(line) {}

void throw_invalid(const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); }

void throw_numeric(const std::string& what) { throw Error(ErrorKind::Numeric, what); }

}  // namespace adet
