#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dispersive/blowup.hpp"
#include "dispersive/config.hpp"
#include "dispersive/diagnostics.hpp"
#include "dispersive/energy.hpp"
#include "dispersive/symbols.hpp"

namespace dispersive {

inline constexpr int kExitCompleted = 0;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitGate = 4;

struct RunSummary {
  int exit_status = kExitCompleted;
  std::string message;
  double final_t = 0.0;
  long steps = 0;
  double dt_final = 0.0;
  int halvings = 0;
  double e0 = 0.0;
  double energy_drift = 0.0;
  std::optional<BoundCheckReport> bound_check;
  std::optional<BlowupEvent> event;
  std::optional<BlowupCertificate> certificate;
  std::vector<GateReport> gates;
  std::optional<BoundReport> symbol_bounds;
  double wall_time_s = 0.0;
  std::vector<DiagnosticsRow> rows;
};

struct RunOptions {
  bool write_outputs = true;
  // false: gates and certificate only.
  bool time_loop = true;
};

// Never throws for plan problems; they surface as exit status 3.
RunSummary run(const RunPlan& plan, const RunOptions& options = {});

// Gates and certificate without stepping; nothing is written.
RunSummary check(const RunPlan& plan);

// with_wall_time = false drops the wall-clock field.
std::string summary_json(const RunSummary& summary, bool with_wall_time = true);

struct SweepRow {
  std::string value;
  int exit_status = 0;
  double drift = 0.0;
  std::optional<double> t_escape;
  std::optional<double> t1_bound;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RunSummary> runs;
};

std::vector<std::string_view> sweep_parameters();

// Each child writes to <output.dir>/run_<index>. All child plans are built
// and validated before any run starts; a bad value throws ConfigError.
SweepResult sweep(const RunPlan& base, std::string_view param, const std::vector<std::string>& values,
                  int workers = 1, bool write_outputs = true);

// Columns value,exit,drift,t_escape,t1_bound; missing values are empty.
std::string sweep_csv(const SweepResult& result);

}  // namespace dispersive
