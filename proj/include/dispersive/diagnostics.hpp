#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dispersive/energy.hpp"

namespace dispersive {

// One sampled line of diagnostics.csv. H-trace fields stay NaN when no valid
// certificate exists; NaN is written as an empty field.
struct DiagnosticsRow {
  NormSample norms;
  EnergyLedger energy;
  double h = std::numeric_limits<double>::quiet_NaN();
  double hp = std::numeric_limits<double>::quiet_NaN();
  double convexity_residual = std::numeric_limits<double>::quiet_NaN();
};

// Data columns in file order (after t).
const std::vector<std::string_view>& diagnostics_columns();

// Throws ConfigError for an unknown column name.
double diagnostics_value(const DiagnosticsRow& row, std::string_view column);

// Header t,E,E_kin,E_ela,E_pot,norm_u_s,norm_ut_s1,norm_u_gq,norm_ut_gq,linf,H,Hp,convexity_residual
std::string diagnostics_csv(std::span<const DiagnosticsRow> rows);

// Line chart of the requested columns against t: one polyline per column,
// linear axes with labelled ticks. Needs at least two rows.
std::string emit_svg(std::span<const DiagnosticsRow> rows, const std::vector<std::string>& columns);

}  // namespace dispersive
