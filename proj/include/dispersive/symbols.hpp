#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dispersive {

// Even real Fourier symbol m(xi). Rational symbols are polynomials in xi^2
// with ascending coefficients: num = {1, 1} means 1 + xi^2. Tabulated symbols
// interpolate linearly in |xi| and hold the last value beyond the table.
class SymbolExpr {
 public:
  enum class Kind { constant, rational, tabulated };

  SymbolExpr() : num_{1.0}, den_{1.0} {}

  static SymbolExpr constant(double value);
  static SymbolExpr rational(std::vector<double> num, std::vector<double> den);
  static SymbolExpr tabulated(std::vector<double> xi, std::vector<double> values);

  // Throws invalid-symbol when the value is not finite (e.g. a root of the
  // denominator was hit).
  double operator()(double xi) const;

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& num() const noexcept { return num_; }
  const std::vector<double>& den() const noexcept { return den_; }
  const std::vector<double>& table_xi() const noexcept { return table_xi_; }
  const std::vector<double>& table_values() const noexcept { return table_values_; }

  bool operator==(const SymbolExpr&) const = default;

 private:
  Kind kind_ = Kind::constant;
  std::vector<double> num_;
  std::vector<double> den_;
  std::vector<double> table_xi_;
  std::vector<double> table_values_;
};

struct Nonlinearity {
  enum class Kind { odd_power, integer_power, polynomial };

  Kind kind = Kind::integer_power;
  double a = 1.0;
  double q = 2.0;
  // polynomial only: coeffs[k] multiplies u^k; coeffs[0] must vanish.
  std::vector<double> coeffs;

  static Nonlinearity odd_power(double a, double q);
  static Nonlinearity integer_power(double a, int q);
  static Nonlinearity polynomial(std::vector<double> coeffs);

  double g(double u) const;
  // Antiderivative with G(0) = 0.
  double G(double u) const;

  // True when g is a polynomial in u (dealiasing is exact for these).
  bool is_polynomial() const;
  // Sufficient check that G(u) >= 0 for all real u.
  bool potential_nonnegative() const;

  bool operator==(const Nonlinearity&) const = default;
};

struct GValues {
  double g;
  double G;
};

GValues g_and_G(const Nonlinearity& nl, double u);

struct EquationSpec {
  std::string name;
  SymbolExpr l;
  SymbolExpr b;
  double rho = 2.0;
  double r = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  Nonlinearity g;
  // Set for presets that knowingly violate the standing symbol bounds.
  std::optional<std::string> warning;

  bool operator==(const EquationSpec&) const = default;
};

std::vector<std::string_view> preset_names();

// Throws preset-not-found for unknown names. Presets carry g = u^2.
EquationSpec make_preset(std::string_view name);

struct SymbolValues {
  double l;
  double b;
  double k;
  double omega;
};

// Throws invalid-symbol when l(xi) < 0 or any value is not finite.
SymbolValues eval_symbols(const EquationSpec& spec, double xi);

struct BoundReport {
  double c1_hat = 0.0;
  double c2_hat = 0.0;
  double c3_hat = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

// Tightest empirical constants for the two-sided bound on l and the upper
// bound on b over the sample set. Throws positivity-violation if b <= 0 at a
// sample.
BoundReport verify_bounds(const EquationSpec& spec, std::span<const double> xi_samples);

struct GateCondition {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct GateReport {
  std::string theorem;
  bool pass = true;
  std::vector<GateCondition> conditions;
  std::vector<std::string> notes;
};

// theorem in {local-3.4, global-4.3, local-6.1, global-6.3, global-6.4,
// blowup-6.5}. nu is only consulted for blowup-6.5; when absent the catalog
// default is used. Failures are reported, never thrown (except for an unknown
// theorem id, which is a precondition error).
GateReport theorem_gate(const EquationSpec& spec, double s, std::string_view theorem,
                        std::optional<double> nu = std::nullopt);

// Smoothness requirement g in C^{order}.
bool nonlinearity_smooth_enough(const Nonlinearity& nl, int order);

struct GrowthReport {
  bool holds = false;
  double worst_margin = 0.0;
  // Closed-form verdict for the power catalog; empty for general polynomials.
  std::optional<bool> closed_form;
  bool agrees = true;
};

// worst_margin = min over samples of 2(1+2nu)G(p) - p g(p).
GrowthReport growth_condition_margin(const Nonlinearity& nl, double nu,
                                     std::span<const double> p_samples);

// Largest nu admitted by the growth condition for power nonlinearities,
// (q - 1) / 4. Empty when the catalog has no such value.
std::optional<double> default_nu(const Nonlinearity& nl);

}  // namespace dispersive
