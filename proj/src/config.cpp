#include "dispersive/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dispersive/diagnostics.hpp"
#include "dispersive/error.hpp"

namespace dispersive {

namespace {

struct RawValue {
  std::string text;
  std::vector<std::string> items;
  bool is_list = false;
  int line = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

RawValue parse_value(std::string_view raw, int line) {
  RawValue v;
  v.line = line;
  v.text = trim(raw);
  if (!v.text.empty() && v.text.front() == '[') {
    if (v.text.back() != ']') throw ConfigError("unterminated list", line);
    v.is_list = true;
    const std::string inner = trim(std::string_view(v.text).substr(1, v.text.size() - 2));
    if (!inner.empty()) {
      std::stringstream ss(inner);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = unquote(trim(item));
        if (item.empty()) throw ConfigError("empty list element", line);
        v.items.push_back(item);
      }
    }
  } else {
    v.text = unquote(v.text);
  }
  return v;
}

double to_double(const std::string& text, int line) {
  if (text.empty()) throw ConfigError("expected a number", line);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + text + "'", line);
  }
  if (used != text.size() || !std::isfinite(value)) throw ConfigError("expected a finite number, got '" + text + "'", line);
  return value;
}

int to_int(const std::string& text, int line) {
  const double v = to_double(text, line);
  if (std::floor(v) != v || std::fabs(v) > 1e9) throw ConfigError("expected an integer, got '" + text + "'", line);
  return static_cast<int>(v);
}

bool to_bool(const std::string& text, int line) {
  if (text == "true" || text == "on" || text == "1") return true;
  if (text == "false" || text == "off" || text == "0") return false;
  throw ConfigError("expected true or false, got '" + text + "'", line);
}

const std::string& scalar(const RawValue& v) {
  if (v.is_list) throw ConfigError("expected a scalar value", v.line);
  return v.text;
}

std::vector<double> to_doubles(const RawValue& v) {
  if (!v.is_list) throw ConfigError("expected a list like [1, 2]", v.line);
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(to_double(item, v.line));
  return out;
}

std::vector<std::string> to_strings(const RawValue& v) {
  if (!v.is_list) throw ConfigError("expected a list like [a, b]", v.line);
  return v.items;
}

std::string render_list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out + "]";
}

std::string render_list(const std::vector<std::string>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out + "]";
}

std::string render_bool(bool b) { return b ? "true" : "false"; }

struct KeySpec {
  std::string_view section;
  std::string_view key;
  std::function<void(RunPlan&, const RawValue&)> set;
  // Empty result: the key is unset and omitted.
  std::function<std::optional<std::string>(const RunPlan&)> render;
};

template <class Member>
KeySpec optional_list(std::string_view section, std::string_view key, Member member) {
  return {section, key,
          [member](RunPlan& p, const RawValue& v) { std::invoke(member, p.equation) = to_doubles(v); },
          [member](const RunPlan& p) -> std::optional<std::string> {
            const auto& field = std::invoke(member, p.equation);
            if (!field) return std::nullopt;
            return render_list(*field);
          }};
}

template <class Member>
KeySpec optional_number(std::string_view section, std::string_view key, Member member) {
  return {section, key,
          [member](RunPlan& p, const RawValue& v) { std::invoke(member, p.equation) = to_double(scalar(v), v.line); },
          [member](const RunPlan& p) -> std::optional<std::string> {
            const auto& field = std::invoke(member, p.equation);
            if (!field) return std::nullopt;
            return format_double(*field);
          }};
}

const std::vector<KeySpec>& key_table() {
  using E = RunPlan::Equation;
  static const std::vector<KeySpec> table = {
      {"equation", "preset",
       [](RunPlan& p, const RawValue& v) {
         const std::string& s = scalar(v);
         p.equation.preset = (s == "none") ? "" : s;
       },
       [](const RunPlan& p) -> std::optional<std::string> {
         return p.equation.preset.empty() ? "none" : p.equation.preset;
       }},
      optional_list("equation", "l.num", &E::l_num),
      optional_list("equation", "l.den", &E::l_den),
      optional_list("equation", "l.table_xi", &E::l_table_xi),
      optional_list("equation", "l.table_values", &E::l_table_values),
      optional_list("equation", "b.num", &E::b_num),
      optional_list("equation", "b.den", &E::b_den),
      optional_list("equation", "b.table_xi", &E::b_table_xi),
      optional_list("equation", "b.table_values", &E::b_table_values),
      optional_number("equation", "rho", &E::rho),
      optional_number("equation", "r", &E::r),
      optional_number("equation", "c1", &E::c1),
      optional_number("equation", "c2", &E::c2),
      optional_number("equation", "c3", &E::c3),
      {"equation", "g.kind", [](RunPlan& p, const RawValue& v) { p.equation.g_kind = scalar(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return p.equation.g_kind; }},
      {"equation", "g.a", [](RunPlan& p, const RawValue& v) { p.equation.g_a = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.equation.g_a); }},
      {"equation", "g.q", [](RunPlan& p, const RawValue& v) { p.equation.g_q = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.equation.g_q); }},
      {"equation", "g.coeffs", [](RunPlan& p, const RawValue& v) { p.equation.g_coeffs = to_doubles(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return render_list(p.equation.g_coeffs); }},
      {"equation", "strict_gates",
       [](RunPlan& p, const RawValue& v) { p.equation.strict_gates = to_bool(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return render_bool(p.equation.strict_gates); }},

      {"grid", "N", [](RunPlan& p, const RawValue& v) { p.grid.n = to_int(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return std::to_string(p.grid.n); }},
      {"grid", "X", [](RunPlan& p, const RawValue& v) { p.grid.half_length = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.grid.half_length); }},

      {"time", "dt", [](RunPlan& p, const RawValue& v) { p.time.dt = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.time.dt); }},
      {"time", "T_end", [](RunPlan& p, const RawValue& v) { p.time.t_end = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.time.t_end); }},
      {"time", "scheme", [](RunPlan& p, const RawValue& v) { p.time.scheme = scalar(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return p.time.scheme; }},
      {"time", "picard_tol", [](RunPlan& p, const RawValue& v) { p.time.picard_tol = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.time.picard_tol); }},
      {"time", "picard_kmax", [](RunPlan& p, const RawValue& v) { p.time.picard_kmax = to_int(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return std::to_string(p.time.picard_kmax); }},
      {"time", "max_halvings",
       [](RunPlan& p, const RawValue& v) { p.time.max_halvings = to_int(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return std::to_string(p.time.max_halvings); }},

      {"initial", "preset", [](RunPlan& p, const RawValue& v) { p.initial.preset = scalar(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return p.initial.preset; }},
      {"initial", "amplitude",
       [](RunPlan& p, const RawValue& v) { p.initial.amplitude = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.initial.amplitude); }},
      {"initial", "width", [](RunPlan& p, const RawValue& v) { p.initial.width = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.initial.width); }},
      {"initial", "mean_zero_project",
       [](RunPlan& p, const RawValue& v) { p.initial.mean_zero_project = to_bool(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return render_bool(p.initial.mean_zero_project); }},
      {"initial", "psi_scale",
       [](RunPlan& p, const RawValue& v) { p.initial.psi_scale = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.initial.psi_scale); }},
      {"initial", "csv", [](RunPlan& p, const RawValue& v) { p.initial.csv = scalar(v); },
       [](const RunPlan& p) -> std::optional<std::string> {
         if (p.initial.csv.empty()) return std::nullopt;
         return p.initial.csv;
       }},

      {"diagnostics", "stride",
       [](RunPlan& p, const RawValue& v) { p.diagnostics.stride = to_int(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return std::to_string(p.diagnostics.stride); }},
      {"diagnostics", "s", [](RunPlan& p, const RawValue& v) { p.diagnostics.s = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.diagnostics.s); }},
      {"diagnostics", "blowup_factor",
       [](RunPlan& p, const RawValue& v) { p.diagnostics.blowup_factor = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.diagnostics.blowup_factor); }},
      {"diagnostics", "nu", [](RunPlan& p, const RawValue& v) { p.diagnostics.nu = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> {
         if (!p.diagnostics.nu) return std::nullopt;
         return format_double(*p.diagnostics.nu);
       }},
      {"diagnostics", "bound_tol",
       [](RunPlan& p, const RawValue& v) { p.diagnostics.bound_tol = to_double(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return format_double(p.diagnostics.bound_tol); }},
      {"diagnostics", "dealias", [](RunPlan& p, const RawValue& v) { p.diagnostics.dealias = scalar(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return p.diagnostics.dealias; }},

      {"output", "dir", [](RunPlan& p, const RawValue& v) { p.output.dir = scalar(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return p.output.dir; }},
      {"output", "snapshots", [](RunPlan& p, const RawValue& v) { p.output.snapshots = to_doubles(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return render_list(p.output.snapshots); }},
      {"output", "svg", [](RunPlan& p, const RawValue& v) { p.output.svg = to_bool(scalar(v), v.line); },
       [](const RunPlan& p) -> std::optional<std::string> { return render_bool(p.output.svg); }},
      {"output", "svg_columns", [](RunPlan& p, const RawValue& v) { p.output.svg_columns = to_strings(v); },
       [](const RunPlan& p) -> std::optional<std::string> { return render_list(p.output.svg_columns); }},
  };
  return table;
}

const KeySpec* find_key(std::string_view section, std::string_view key) {
  for (const auto& spec : key_table())
    if (spec.section == section && spec.key == key) return &spec;
  return nullptr;
}

}  // namespace

std::vector<std::string_view> initial_presets() { return {"gaussian-derivative", "modulated-sine", "custom-csv"}; }

RunPlan parse_config(std::string_view text) {
  RunPlan plan;
  std::string section;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') throw ConfigError("malformed section header", number);
      section = trim(std::string_view(stripped).substr(1, stripped.size() - 2));
      static const std::set<std::string> sections = {"equation", "grid", "time", "initial", "diagnostics", "output"};
      if (!sections.count(section)) throw ConfigError("unknown section [" + section + "]", number);
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", number);
    if (section.empty()) throw ConfigError("key outside of a section", number);
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const KeySpec* spec = find_key(section, key);
    if (!spec) throw ConfigError("unknown key '" + key + "' in [" + section + "]", number);
    if (!seen.emplace(section + "." + key, number).second) throw ConfigError("duplicate key '" + key + "'", number);
    spec->set(plan, parse_value(std::string_view(stripped).substr(eq + 1), number));
  }
  validate(plan, seen);
  return plan;
}

RunPlan load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void set_plan_value(RunPlan& plan, std::string_view dotted_key, std::string_view value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) throw ConfigError("expected section.key, got '" + std::string(dotted_key) + "'");
  const KeySpec* spec = find_key(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!spec) throw ConfigError("unknown key '" + std::string(dotted_key) + "'");
  spec->set(plan, parse_value(value, 0));
  validate(plan);
}

std::string render_config(const RunPlan& plan) {
  std::string out;
  std::string_view current;
  for (const auto& spec : key_table()) {
    const auto value = spec.render(plan);
    if (!value) continue;
    if (spec.section != current) {
      if (!out.empty()) out += '\n';
      out += "[" + std::string(spec.section) + "]\n";
      current = spec.section;
    }
    out += std::string(spec.key) + " = " + *value + "\n";
  }
  return out;
}

EquationSpec build_equation(const RunPlan& plan) {
  const auto& e = plan.equation;
  EquationSpec spec;
  if (!e.preset.empty()) {
    spec = make_preset(e.preset);
  } else {
    if (!e.l_num && !e.l_table_xi) throw ConfigError("[equation] needs a preset or inline l symbol");
    if (!e.rho) throw ConfigError("[equation] inline symbols need rho");
    spec.name = "custom";
    spec.r = 0.0;
  }

  if (e.l_table_xi || e.l_table_values) {
    spec.l = SymbolExpr::tabulated(e.l_table_xi.value_or(std::vector<double>{}),
                                   e.l_table_values.value_or(std::vector<double>{}));
  } else if (e.l_num) {
    spec.l = SymbolExpr::rational(*e.l_num, e.l_den.value_or(std::vector<double>{1.0}));
  } else if (e.l_den) {
    throw ConfigError("l.den given without l.num");
  }
  if (e.b_table_xi || e.b_table_values) {
    spec.b = SymbolExpr::tabulated(e.b_table_xi.value_or(std::vector<double>{}),
                                   e.b_table_values.value_or(std::vector<double>{}));
  } else if (e.b_num || e.b_den) {
    spec.b = SymbolExpr::rational(e.b_num.value_or(std::vector<double>{1.0}),
                                  e.b_den.value_or(std::vector<double>{1.0}));
  }
  if (e.rho) spec.rho = *e.rho;
  if (e.r) spec.r = *e.r;
  if (e.c1) spec.c1 = *e.c1;
  if (e.c2) spec.c2 = *e.c2;
  if (e.c3) spec.c3 = *e.c3;

  if (e.g_kind == "odd-power") {
    spec.g = Nonlinearity::odd_power(e.g_a, e.g_q);
  } else if (e.g_kind == "integer-power") {
    if (std::floor(e.g_q) != e.g_q) throw ConfigError("integer-power nonlinearity needs an integer g.q");
    spec.g = Nonlinearity::integer_power(e.g_a, static_cast<int>(e.g_q));
  } else if (e.g_kind == "polynomial") {
    spec.g = Nonlinearity::polynomial(e.g_coeffs);
  } else {
    throw ConfigError("unknown g.kind '" + e.g_kind + "'");
  }
  return spec;
}

GridSpec build_grid(const RunPlan& plan) { return make_grid(plan.grid.n, plan.grid.half_length); }

bool dealias_enabled(const RunPlan& plan) {
  if (plan.diagnostics.dealias == "on") return true;
  if (plan.diagnostics.dealias == "off") return false;
  return default_dealias(build_equation(plan).g);
}

namespace {

// Validation failure tied to the key that caused it, so the parser can
// report the line.
struct KeyedFailure {
  std::string key;
  std::string message;
};

[[noreturn]] void fail(std::string key, std::string message) { throw KeyedFailure{std::move(key), std::move(message)}; }

void validate_keyed(const RunPlan& plan) {
  try {
    build_equation(plan);
  } catch (const ConfigError& e) {
    fail(plan.equation.preset.empty() ? "equation.rho" : "equation.preset", e.what());
  } catch (const Error& e) {
    fail(plan.equation.preset.empty() ? "equation.l.num" : "equation.preset", std::string("[equation] ") + e.what());
  }
  try {
    make_grid(plan.grid.n, 1.0);
  } catch (const Error& e) {
    fail("grid.N", e.what());
  }
  try {
    build_grid(plan);
  } catch (const Error& e) {
    fail("grid.X", e.what());
  }

  const auto& t = plan.time;
  if (!(t.dt > 0.0)) fail("time.dt", "[time] dt must be positive");
  if (!(t.t_end >= t.dt)) fail("time.T_end", "[time] T_end must be >= dt");
  try {
    scheme_from_string(t.scheme);
  } catch (const Error& e) {
    fail("time.scheme", e.what());
  }
  if (!(t.picard_tol > 0.0)) fail("time.picard_tol", "[time] picard_tol must be positive");
  if (t.picard_kmax < 1) fail("time.picard_kmax", "[time] picard_kmax must be >= 1");
  if (t.max_halvings < 0) fail("time.max_halvings", "[time] max_halvings must be >= 0");

  const auto& i = plan.initial;
  const auto presets = initial_presets();
  if (std::find(presets.begin(), presets.end(), i.preset) == presets.end())
    fail("initial.preset", "[initial] unknown preset '" + i.preset + "'");
  if (!(i.width > 0.0)) fail("initial.width", "[initial] width must be positive");
  if (i.preset == "custom-csv" && i.csv.empty()) fail("initial.preset", "[initial] custom-csv needs csv = <path>");

  const auto& d = plan.diagnostics;
  if (d.stride < 1) fail("diagnostics.stride", "[diagnostics] stride must be >= 1");
  if (!(d.blowup_factor > 1.0)) fail("diagnostics.blowup_factor", "[diagnostics] blowup_factor must exceed 1");
  if (d.nu && !(*d.nu > 0.0)) fail("diagnostics.nu", "[diagnostics] nu must be positive");
  if (!(d.bound_tol >= 0.0)) fail("diagnostics.bound_tol", "[diagnostics] bound_tol must be >= 0");
  if (d.dealias != "auto" && d.dealias != "on" && d.dealias != "off")
    fail("diagnostics.dealias", "[diagnostics] dealias must be auto, on or off");

  for (double s : plan.output.snapshots)
    if (s < 0.0) fail("output.snapshots", "[output] snapshot times must be >= 0");
  for (const auto& column : plan.output.svg_columns)
    if (std::ranges::find(diagnostics_columns(), column) == diagnostics_columns().end())
      fail("output.svg_columns", "[output] unknown svg column '" + column + "'");
  if (plan.output.dir.empty()) fail("output.dir", "[output] dir must not be empty");
}

}  // namespace

void validate(const RunPlan& plan) {
  try {
    validate_keyed(plan);
  } catch (const KeyedFailure& f) {
    throw ConfigError(f.message);
  }
}

void validate(const RunPlan& plan, const std::map<std::string, int>& key_lines) {
  try {
    validate_keyed(plan);
  } catch (const KeyedFailure& f) {
    auto it = key_lines.find(f.key);
    throw ConfigError(f.message, it == key_lines.end() ? 0 : it->second);
  }
}

}  // namespace dispersive
