#include "dispersive/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dispersive/error.hpp"

namespace dispersive {

namespace {

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double ipow(double x, int n) {
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= x;
  return result;
}

bool is_integer(double q) { return std::floor(q) == q && std::isfinite(q); }

// |u|^p, exact repeated multiplication when p is a small integer.
double abs_pow(double u, double p) {
  const double au = std::fabs(u);
  if (is_integer(p) && p >= 0.0 && p <= 64.0) return ipow(au, static_cast<int>(p));
  return std::pow(au, p);
}

std::vector<double> gate_samples() {
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(0.25 * i);
  return xs;
}

}  // namespace

SymbolExpr SymbolExpr::constant(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::invalid_symbol, "constant symbol is not finite");
  SymbolExpr s;
  s.kind_ = Kind::constant;
  s.num_ = {value};
  s.den_ = {1.0};
  s.table_xi_.clear();
  s.table_values_.clear();
  return s;
}

SymbolExpr SymbolExpr::rational(std::vector<double> num, std::vector<double> den) {
  if (num.empty() || den.empty())
    throw Error(ErrorCode::invalid_symbol, "rational symbol needs numerator and denominator coefficients");
  if (std::all_of(den.begin(), den.end(), [](double c) { return c == 0.0; }))
    throw Error(ErrorCode::invalid_symbol, "rational symbol has a zero denominator");
  for (double c : num)
    if (!std::isfinite(c)) throw Error(ErrorCode::invalid_symbol, "non-finite symbol coefficient");
  for (double c : den)
    if (!std::isfinite(c)) throw Error(ErrorCode::invalid_symbol, "non-finite symbol coefficient");
  SymbolExpr s;
  s.kind_ = Kind::rational;
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  return s;
}

SymbolExpr SymbolExpr::tabulated(std::vector<double> xi, std::vector<double> values) {
  if (xi.empty() || xi.size() != values.size())
    throw Error(ErrorCode::invalid_symbol, "tabulated symbol needs matching, nonempty xi and value lists");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!std::isfinite(xi[i]) || !std::isfinite(values[i]) || xi[i] < 0.0)
      throw Error(ErrorCode::invalid_symbol, "tabulated symbol entries must be finite with xi >= 0");
    if (i > 0 && !(xi[i] > xi[i - 1]))
      throw Error(ErrorCode::invalid_symbol, "tabulated symbol xi must be strictly increasing");
  }
  SymbolExpr s;
  s.kind_ = Kind::tabulated;
  s.num_.clear();
  s.den_.clear();
  s.table_xi_ = std::move(xi);
  s.table_values_ = std::move(values);
  return s;
}

double SymbolExpr::operator()(double xi) const {
  double value = 0.0;
  switch (kind_) {
    case Kind::constant:
      value = num_.front();
      break;
    case Kind::rational: {
      const double x2 = xi * xi;
      value = horner(num_, x2) / horner(den_, x2);
      break;
    }
    case Kind::tabulated: {
      const double ax = std::fabs(xi);
      if (ax <= table_xi_.front()) {
        value = table_values_.front();
      } else if (ax >= table_xi_.back()) {
        value = table_values_.back();
      } else {
        const auto hi = std::upper_bound(table_xi_.begin(), table_xi_.end(), ax);
        const auto i = static_cast<std::size_t>(hi - table_xi_.begin());
        const double w = (ax - table_xi_[i - 1]) / (table_xi_[i] - table_xi_[i - 1]);
        value = (1.0 - w) * table_values_[i - 1] + w * table_values_[i];
      }
      break;
    }
  }
  if (!std::isfinite(value))
    throw Error(ErrorCode::invalid_symbol, "symbol is not finite at xi = " + std::to_string(xi));
  return value;
}

Nonlinearity Nonlinearity::odd_power(double a, double q) {
  if (!(q > 1.0)) throw Error(ErrorCode::precondition, "odd-power nonlinearity needs q > 1");
  return Nonlinearity{Kind::odd_power, a, q, {}};
}

Nonlinearity Nonlinearity::integer_power(double a, int q) {
  if (q < 2) throw Error(ErrorCode::precondition, "integer-power nonlinearity needs q >= 2");
  return Nonlinearity{Kind::integer_power, a, static_cast<double>(q), {}};
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (coeffs.front() != 0.0) throw Error(ErrorCode::precondition, "polynomial nonlinearity needs g(0) = 0");
  return Nonlinearity{Kind::polynomial, 1.0, 0.0, std::move(coeffs)};
}

double Nonlinearity::g(double u) const {
  switch (kind) {
    case Kind::odd_power:
      return a * abs_pow(u, q - 1.0) * u;
    case Kind::integer_power:
      return a * ipow(u, static_cast<int>(q));
    case Kind::polynomial:
      return horner(coeffs, u);
  }
  return 0.0;
}

double Nonlinearity::G(double u) const {
  switch (kind) {
    case Kind::odd_power:
      return a * abs_pow(u, q + 1.0) / (q + 1.0);
    case Kind::integer_power:
      return a * ipow(u, static_cast<int>(q) + 1) / (q + 1.0);
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * u + coeffs[k] / static_cast<double>(k + 1);
      return acc * u;
    }
  }
  return 0.0;
}

bool Nonlinearity::is_polynomial() const {
  switch (kind) {
    case Kind::odd_power:
      return is_integer(q) && static_cast<long long>(q) % 2 == 1;
    case Kind::integer_power:
    case Kind::polynomial:
      return true;
  }
  return false;
}

bool Nonlinearity::potential_nonnegative() const {
  switch (kind) {
    case Kind::odd_power:
      return a >= 0.0;
    case Kind::integer_power:
      return a == 0.0 || (a > 0.0 && static_cast<long long>(q) % 2 == 1);
    case Kind::polynomial:
      // G(u) = sum c_k u^{k+1}/(k+1): only even powers of u, all nonnegative.
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const bool even_power = (k + 1) % 2 == 0;
        if (even_power ? coeffs[k] < 0.0 : coeffs[k] != 0.0) return false;
      }
      return true;
  }
  return false;
}

GValues g_and_G(const Nonlinearity& nl, double u) { return {nl.g(u), nl.G(u)}; }

std::vector<std::string_view> preset_names() {
  return {"boussinesq", "improved-boussinesq", "double-dispersion", "nonlocal-kernel"};
}

EquationSpec make_preset(std::string_view name) {
  EquationSpec spec;
  spec.name = std::string(name);
  spec.g = Nonlinearity::integer_power(1.0, 2);
  if (name == "boussinesq") {
    // u_tt - u_xx + u_xxxx = g(u)_xx
    spec.l = SymbolExpr::rational({1.0, 1.0}, {1.0});
    spec.b = SymbolExpr::constant(1.0);
    spec.rho = 2.0;
    spec.r = 0.0;
  } else if (name == "improved-boussinesq") {
    // u_tt - u_xx - u_xxtt = g(u)_xx
    spec.l = SymbolExpr::rational({1.0}, {1.0, 1.0});
    spec.b = SymbolExpr::rational({1.0}, {1.0, 1.0});
    spec.rho = -2.0;
    spec.r = 2.0;
  } else if (name == "double-dispersion") {
    // u_tt - u_xx - u_xxtt + u_xxxx = g(u)_xx
    spec.l = SymbolExpr::constant(1.0);
    spec.b = SymbolExpr::rational({1.0}, {1.0, 1.0});
    spec.rho = 0.0;
    spec.r = 2.0;
  } else if (name == "nonlocal-kernel") {
    // u_tt = (beta * g(u))_xx with beta = exp(-|x|)/2, no linear elasticity.
    spec.l = SymbolExpr::constant(0.0);
    spec.b = SymbolExpr::rational({1.0}, {1.0, 1.0});
    spec.rho = 0.0;
    spec.r = 2.0;
    spec.c1 = 0.0;
    spec.c2 = 0.0;
    spec.warning = "l = 0 violates the coercive lower bound on the symbol of L";
  } else {
    throw Error(ErrorCode::preset_not_found, "unknown preset '" + std::string(name) + "'");
  }
  return spec;
}

SymbolValues eval_symbols(const EquationSpec& spec, double xi) {
  const double l = spec.l(xi);
  const double b = spec.b(xi);
  if (l < 0.0) throw Error(ErrorCode::invalid_symbol, "l(xi) < 0 at xi = " + std::to_string(xi));
  const double k = std::sqrt(l);
  return {l, b, k, xi * k};
}

BoundReport verify_bounds(const EquationSpec& spec, std::span<const double> xi_samples) {
  if (xi_samples.empty()) throw Error(ErrorCode::precondition, "verify_bounds needs at least one sample");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double b_hi = 0.0;
  for (double xi : xi_samples) {
    const double w = 1.0 + xi * xi;
    const double l = spec.l(xi);
    const double b = spec.b(xi);
    if (!(b > 0.0))
      throw Error(ErrorCode::positivity_violation, "b(xi) <= 0 at xi = " + std::to_string(xi));
    const double ratio = l / std::pow(w, spec.rho / 2.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    b_hi = std::max(b_hi, b * std::pow(w, spec.r / 2.0));
  }
  BoundReport report;
  report.c1_hat = std::sqrt(std::max(lo, 0.0));
  report.c2_hat = std::sqrt(std::max(hi, 0.0));
  report.c3_hat = std::sqrt(b_hi);
  report.pass = report.c1_hat > 0.0;
  if (!report.pass)
    report.failures.push_back("positivity-violation: c1 = 0, coercive lower bound on l fails");
  return report;
}

bool nonlinearity_smooth_enough(const Nonlinearity& nl, int order) {
  if (nl.kind != Nonlinearity::Kind::odd_power) return true;
  return nl.q >= static_cast<double>(order) || nl.is_polynomial();
}

namespace {

void add(GateReport& report, std::string name, double value, double threshold, bool pass) {
  report.conditions.push_back({std::move(name), value, threshold, pass});
  report.pass = report.pass && pass;
}

void add_at_least(GateReport& report, std::string name, double value, double threshold) {
  add(report, std::move(name), value, threshold, value >= threshold);
}

void add_greater(GateReport& report, std::string name, double value, double threshold) {
  add(report, std::move(name), value, threshold, value > threshold);
}

void add_smoothness(GateReport& report, const Nonlinearity& nl, double index) {
  const int order = static_cast<int>(std::floor(index)) + 1;
  add(report, "g in C^" + std::to_string(order), nl.q, order, nonlinearity_smooth_enough(nl, order));
}

void add_identity_b(GateReport& report, const EquationSpec& spec) {
  double worst = 0.0;
  for (double xi : gate_samples()) worst = std::max(worst, std::fabs(spec.b(xi) - 1.0));
  add(report, "B = I (max |b - 1|)", worst, 0.0, worst == 0.0);
}

}  // namespace

GateReport theorem_gate(const EquationSpec& spec, double s, std::string_view theorem,
                        std::optional<double> nu) {
  GateReport report;
  report.theorem = std::string(theorem);
  add_greater(report, "c1 > 0 (coercive l)", spec.c1, 0.0);

  const double half_rho = spec.rho / 2.0;
  if (theorem == "local-3.4") {
    add_at_least(report, "rho >= 2", spec.rho, 2.0);
    add_greater(report, "s > 1/2", s, 0.5);
    add_smoothness(report, spec.g, s);
    add_identity_b(report, spec);
  } else if (theorem == "global-4.3") {
    add_at_least(report, "rho >= 2", spec.rho, 2.0);
    add_smoothness(report, spec.g, half_rho);
    add(report, "G >= 0", spec.g.potential_nonnegative() ? 1.0 : 0.0, 1.0, spec.g.potential_nonnegative());
    add_identity_b(report, spec);
  } else if (theorem == "local-6.1") {
    add_at_least(report, "rho/2 + r >= 1", half_rho + spec.r, 1.0);
    add_greater(report, "s > 1/2", s, 0.5);
    add_smoothness(report, spec.g, s);
  } else if (theorem == "global-6.3") {
    add_at_least(report, "r + rho/2 >= 1", spec.r + half_rho, 1.0);
    add_smoothness(report, spec.g, spec.r / 2.0 + half_rho);
    add(report, "G >= 0", spec.g.potential_nonnegative() ? 1.0 : 0.0, 1.0, spec.g.potential_nonnegative());
    report.notes.push_back("solution space index is r/2 + rho/2 = " + std::to_string(spec.r / 2.0 + half_rho));
  } else if (theorem == "global-6.4") {
    add_at_least(report, "r + rho/2 >= 1", spec.r + half_rho, 1.0);
    add_greater(report, "r/2 + rho/2 > 1/2", spec.r / 2.0 + half_rho, 0.5);
    add_greater(report, "s > 1/2", s, 0.5);
    add_smoothness(report, spec.g, s);
    add(report, "G >= 0", spec.g.potential_nonnegative() ? 1.0 : 0.0, 1.0, spec.g.potential_nonnegative());
  } else if (theorem == "blowup-6.5") {
    const std::optional<double> chosen = nu ? nu : default_nu(spec.g);
    const double nu_value = chosen.value_or(0.0);
    add_greater(report, "nu > 0", nu_value, 0.0);
    if (nu_value > 0.0) {
      std::vector<double> ps;
      for (int i = -400; i <= 400; ++i) ps.push_back(0.01 * i);
      const GrowthReport growth = growth_condition_margin(spec.g, nu_value, ps);
      add(report, "p g(p) <= 2(1+2nu) G(p)", growth.worst_margin, 0.0, growth.holds);
    }
    report.notes.push_back("negative initial energy is checked per run by the certificate");
  } else {
    throw Error(ErrorCode::precondition, "unknown theorem id '" + std::string(theorem) + "'");
  }

  if (spec.rho < 0.0)
    report.notes.push_back("standing assumption rho >= 0 fails (rho = " + std::to_string(spec.rho) +
                           "); evaluated under the permissive reading");
  if (spec.warning) report.notes.push_back(*spec.warning);
  return report;
}

GrowthReport growth_condition_margin(const Nonlinearity& nl, double nu, std::span<const double> p_samples) {
  if (!(nu > 0.0)) throw Error(ErrorCode::precondition, "growth condition needs nu > 0");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double factor = 2.0 * (1.0 + 2.0 * nu);
  GrowthReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.holds = true;
  for (double p : p_samples) {
    const double lhs = p * nl.g(p);
    const double rhs = factor * nl.G(p);
    const double margin = rhs - lhs;
    report.worst_margin = std::min(report.worst_margin, margin);
    // Equality cases (q = 1 + 4 nu) land on zero up to rounding.
    if (margin < -64.0 * eps * (std::fabs(lhs) + std::fabs(rhs))) report.holds = false;
  }
  if (p_samples.empty()) report.worst_margin = 0.0;

  const double critical = 1.0 + 4.0 * nu;
  auto power_verdict = [&](double a, double q) {
    if (a == 0.0) return true;
    return a < 0.0 ? q >= critical : q <= critical;
  };
  switch (nl.kind) {
    case Nonlinearity::Kind::odd_power:
      report.closed_form = power_verdict(nl.a, nl.q);
      break;
    case Nonlinearity::Kind::integer_power: {
      const bool odd_q = static_cast<long long>(nl.q) % 2 == 1;
      report.closed_form = odd_q ? power_verdict(nl.a, nl.q)
                                 : (nl.a == 0.0 || std::fabs(nl.q - critical) <= 1e-12);
      break;
    }
    case Nonlinearity::Kind::polynomial:
      break;
  }
  if (report.closed_form) report.agrees = *report.closed_form == report.holds;
  return report;
}

std::optional<double> default_nu(const Nonlinearity& nl) {
  if (nl.kind == Nonlinearity::Kind::odd_power && nl.q > 1.0) return (nl.q - 1.0) / 4.0;
  if (nl.kind == Nonlinearity::Kind::integer_power && static_cast<long long>(nl.q) % 2 == 1)
    return (nl.q - 1.0) / 4.0;
  return std::nullopt;
}

}  // namespace dispersive
