#include "dispersive/error.hpp"

namespace dispersive {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::preset_not_found: return "preset-not-found";
    case ErrorCode::invalid_symbol: return "invalid-symbol";
    case ErrorCode::positivity_violation: return "positivity-violation";
    case ErrorCode::multiplier_singularity: return "multiplier-singularity";
    case ErrorCode::mean_mode_error: return "mean-mode-error";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::contraction_failure: return "contraction-failure";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::ingestion_error: return "ingestion-error";
    case ErrorCode::precondition: return "precondition";
  }
  return "unknown";
}

}  // namespace dispersive
