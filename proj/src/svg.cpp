#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dispersive/diagnostics.hpp"
#include "dispersive/error.hpp"
#include "dispersive/spectral.hpp"

namespace dispersive {

const std::vector<std::string_view>& diagnostics_columns() {
  static const std::vector<std::string_view> columns = {
      "E", "E_kin", "E_ela", "E_pot", "norm_u_s", "norm_ut_s1", "norm_u_gq", "norm_ut_gq", "linf", "H", "Hp",
      "convexity_residual"};
  return columns;
}

double diagnostics_value(const DiagnosticsRow& row, std::string_view column) {
  if (column == "t") return row.norms.t;
  if (column == "E") return row.energy.total;
  if (column == "E_kin") return row.energy.kinetic;
  if (column == "E_ela") return row.energy.elastic;
  if (column == "E_pot") return row.energy.potential;
  if (column == "norm_u_s") return row.norms.norm_u_s;
  if (column == "norm_ut_s1") return row.norms.norm_ut_s1;
  if (column == "norm_u_gq") return row.norms.norm_u_gq;
  if (column == "norm_ut_gq") return row.norms.norm_ut_gq;
  if (column == "linf") return row.norms.linf;
  if (column == "H") return row.h;
  if (column == "Hp") return row.hp;
  if (column == "convexity_residual") return row.convexity_residual;
  throw ConfigError("unknown diagnostics column '" + std::string(column) + "'");
}

std::string diagnostics_csv(std::span<const DiagnosticsRow> rows) {
  std::string out = "t";
  for (auto c : diagnostics_columns()) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (const auto& row : rows) {
    out += format_double(row.norms.t);
    for (auto c : diagnostics_columns()) {
      out += ',';
      const double v = diagnostics_value(row, c);
      if (!std::isnan(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string emit_svg(std::span<const DiagnosticsRow> rows, const std::vector<std::string>& columns) {
  if (rows.size() < 2) throw Error(ErrorCode::precondition, "chart needs at least two rows");
  if (columns.empty()) throw ConfigError("chart needs at least one column");
  for (const auto& c : columns) diagnostics_value(rows.front(), c);

  constexpr double width = 800.0, height = 480.0;
  constexpr double left = 90.0, right = 20.0, top = 20.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  const double t_min = rows.front().norms.t;
  double t_max = rows.back().norms.t;
  if (!(t_max > t_min)) t_max = t_min + 1.0;
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows)
    for (const auto& c : columns) {
      const double v = diagnostics_value(row, c);
      if (!std::isfinite(v)) continue;
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  if (!std::isfinite(y_min)) {
    y_min = 0.0;
    y_max = 1.0;
  }
  if (!(y_max > y_min)) {
    const double pad = y_min == 0.0 ? 1.0 : 0.5 * std::fabs(y_min);
    y_min -= pad;
    y_max += pad;
  }

  auto sx = [&](double t) { return left + (t - t_min) / (t_max - t_min) * plot_w; };
  auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" viewBox=\"0 0 800 480\">\n";
  out += "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
         num(top + plot_h) + "\"/>\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + plot_h) +
         "\"/>\n";
  constexpr int ticks = 5;
  for (int i = 0; i < ticks; ++i) {
    const double tv = t_min + (t_max - t_min) * i / (ticks - 1);
    const double yv = y_min + (y_max - y_min) * i / (ticks - 1);
    out += "<line x1=\"" + num(sx(tv)) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(sx(tv)) + "\" y2=\"" +
           num(top + plot_h + 5) + "\"/>\n";
    out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(yv)) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(sy(yv)) + "\"/>\n";
  }
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int i = 0; i < ticks; ++i) {
    const double tv = t_min + (t_max - t_min) * i / (ticks - 1);
    const double yv = y_min + (y_max - y_min) * i / (ticks - 1);
    out += "<text x=\"" + num(sx(tv)) + "\" y=\"" + num(top + plot_h + 20) + "\" text-anchor=\"middle\">" +
           label(tv) + "</text>\n";
    out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(yv) + 4) + "\" text-anchor=\"end\">" + label(yv) +
           "</text>\n";
  }
  out += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 8) + "\" text-anchor=\"middle\">t</text>\n";
  out += "</g>\n";

  for (std::size_t c = 0; c < columns.size(); ++c) {
    const char* colour = kPalette[c % std::size(kPalette)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : rows) {
      const double v = diagnostics_value(row, columns[c]);
      if (!std::isfinite(v)) continue;
      if (!first) out += ' ';
      out += num(sx(row.norms.t)) + "," + num(sy(v));
      first = false;
    }
    out += "\"/>\n";
    out += "<text x=\"" + num(left + 10) + "\" y=\"" + num(top + 15 + 15 * c) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + colour + "\">" + columns[c] + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dispersive
