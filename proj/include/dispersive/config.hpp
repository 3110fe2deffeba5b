#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dispersive/propagator.hpp"
#include "dispersive/spectral.hpp"
#include "dispersive/symbols.hpp"

namespace dispersive {

// Sectioned key=value run description. Every key is listed in the README;
// unset optional keys fall back to the preset or to empirical estimates.
struct RunPlan {
  struct Equation {
    std::string preset = "boussinesq";  // empty ("none"): symbols given inline
    std::optional<std::vector<double>> l_num, l_den, l_table_xi, l_table_values;
    std::optional<std::vector<double>> b_num, b_den, b_table_xi, b_table_values;
    std::optional<double> rho, r, c1, c2, c3;
    std::string g_kind = "integer-power";
    double g_a = 1.0;
    double g_q = 2.0;
    std::vector<double> g_coeffs;
    bool strict_gates = true;
    bool operator==(const Equation&) const = default;
  } equation;

  struct Grid {
    int n = 256;
    double half_length = 50.0;
    bool operator==(const Grid&) const = default;
  } grid;

  struct Time {
    double dt = 1e-3;
    double t_end = 1.0;
    std::string scheme = "exp-midpoint";
    double picard_tol = 1e-12;
    int picard_kmax = 50;
    int max_halvings = 0;
    bool operator==(const Time&) const = default;
  } time;

  struct Initial {
    std::string preset = "gaussian-derivative";
    double amplitude = 1.0;
    double width = 1.0;
    bool mean_zero_project = false;
    double psi_scale = 0.0;
    std::string csv;
    bool operator==(const Initial&) const = default;
  } initial;

  struct Diagnostics {
    int stride = 10;
    double s = 1.0;
    double blowup_factor = 1e8;
    std::optional<double> nu;
    double bound_tol = 1e-6;
    std::string dealias = "auto";
    bool operator==(const Diagnostics&) const = default;
  } diagnostics;

  struct Output {
    std::string dir = "out";
    std::vector<double> snapshots;
    bool svg = false;
    std::vector<std::string> svg_columns = {"E"};
    bool operator==(const Output&) const = default;
  } output;

  bool operator==(const RunPlan&) const = default;
};

// Throws ConfigError (with line number where one applies) for syntax errors,
// unknown or duplicate keys and invariant violations.
RunPlan parse_config(std::string_view text);
RunPlan load_config(const std::string& path);

// Sets one key from its textual value, e.g. ("initial.amplitude", "0.5").
// The plan is revalidated afterwards.
void set_plan_value(RunPlan& plan, std::string_view dotted_key, std::string_view value);

// Serializes every field; parse_config(render_config(p)) == p.
std::string render_config(const RunPlan& plan);

void validate(const RunPlan& plan);
// Same checks; failures carry the line of the offending key when known.
void validate(const RunPlan& plan, const std::map<std::string, int>& key_lines);

EquationSpec build_equation(const RunPlan& plan);
GridSpec build_grid(const RunPlan& plan);
bool dealias_enabled(const RunPlan& plan);

std::vector<std::string_view> initial_presets();

struct InitialProfiles {
  std::vector<double> phi;
  std::vector<double> psi;
  bool odd = false;
};

// Grid samples of u(x, 0) and u_t(x, 0) before any transform.
InitialProfiles initial_profiles(const RunPlan& plan, const GridSpec& grid);

// Initial spectra of phi and psi (and t = 0). Throws ingestion-error when
// custom CSV data do not cover the grid.
FieldState build_initial_state(const RunPlan& plan, const GridSpec& grid, FourierTransform& transform);

}  // namespace dispersive
