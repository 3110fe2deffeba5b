#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dispersive {

enum class ErrorCode {
  preset_not_found,
  invalid_symbol,
  positivity_violation,
  multiplier_singularity,
  mean_mode_error,
  overflow,
  contraction_failure,
  config_error,
  ingestion_error,
  precondition,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-finite values appeared while evaluating the solution at time t.
class OverflowError : public Error {
 public:
  OverflowError(double t, const std::string& what)
      : Error(ErrorCode::overflow, what), t_(t) {}

  double time() const noexcept { return t_; }

 private:
  double t_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(ErrorCode::config_error,
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace dispersive
