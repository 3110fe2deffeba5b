#include "dispersive/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dispersive/error.hpp"

namespace dispersive {

SpectrumField lambda_inv(const SpectrumField& c) {
  double size = 0.0;
  for (const auto& z : c.c) size += std::norm(z);
  size = std::sqrt(size);
  if (std::abs(c.c[0]) > kMeanModeTolerance * size)
    throw Error(ErrorCode::mean_mode_error, "Lambda^{-1} needs mean-zero data (|c_0| = " +
                                                format_double(std::abs(c.c[0])) + ")");
  SpectrumField out = c;
  out.c[0] = 0.0;
  for (int k = 1; k < c.grid.n; ++k) out.c[k] /= std::fabs(c.grid.xi(k));
  return out;
}

SpectrumField b_inv_sqrt(const SpectrumField& c, const EquationSpec& eq) {
  SpectrumField out = c;
  for (int k = 0; k < c.grid.n; ++k) {
    const double xi = c.grid.xi(k);
    const double b = eq.b(xi);
    if (!(b > 0.0)) throw Error(ErrorCode::positivity_violation, "b(xi) <= 0 at xi = " + format_double(xi));
    out.c[k] /= std::sqrt(b);
  }
  return out;
}

EnergyLedger energy(const FieldState& state, const EquationSpec& eq, FourierTransform& transform) {
  EnergyLedger e;
  e.t = state.t;

  const SpectrumField weighted_v = b_inv_sqrt(lambda_inv(state.v_hat), eq);
  const double kin = sobolev_norm(weighted_v, 0.0);
  e.kinetic = kin * kin;

  const SpectrumField ku = apply_multiplier(state.u_hat, [&eq](double xi) { return eval_symbols(eq, xi).k; });
  const double ela = sobolev_norm(b_inv_sqrt(ku, eq), 0.0);
  e.elastic = ela * ela;

  const auto u = transform.synthesize(state.u_hat);
  double pot = 0.0;
  for (double ui : u.values) pot += eq.g.G(ui);
  e.potential = 2.0 * state.u_hat.grid.dx() * pot;

  e.total = e.kinetic + e.elastic + e.potential;
  return e;
}

EnergyLedger energy(const FieldState& state, const EquationSpec& eq) {
  FourierTransform transform(state.u_hat.grid);
  return energy(state, eq, transform);
}

NormSample norm_series_sample(const FieldState& state, const EquationSpec& eq, double s,
                              FourierTransform& transform) {
  NormSample row;
  row.t = state.t;
  row.norm_u_s = sobolev_norm(state.u_hat, s);
  row.norm_ut_s1 = sobolev_norm(state.v_hat, s - 1.0 - eq.rho / 2.0);
  row.norm_u_gq = sobolev_norm(state.u_hat, eq.rho / 2.0 + eq.r / 2.0);
  row.norm_ut_gq = sobolev_norm(state.v_hat, eq.r / 2.0 - 1.0);
  const auto u = transform.synthesize(state.u_hat);
  for (double v : u.values) row.linf = std::max(row.linf, std::fabs(v));
  for (double v : {row.norm_u_s, row.norm_ut_s1, row.norm_u_gq, row.norm_ut_gq, row.linf})
    if (!std::isfinite(v)) throw OverflowError(state.t, "norm is not finite at t = " + format_double(state.t));
  for (double v : u.values)
    if (!std::isfinite(v)) throw OverflowError(state.t, "field is not finite at t = " + format_double(state.t));
  return row;
}

BoundCheckReport global_bound_check(std::span<const NormSample> series, const EquationSpec& eq, double c1,
                                    double c3, double e0, double tol) {
  if (!eq.g.potential_nonnegative())
    throw Error(ErrorCode::precondition, "global bound check needs G >= 0");
  if (!(e0 >= 0.0)) throw Error(ErrorCode::precondition, "global bound check needs E(0) >= 0");
  if (!(c1 > 0.0)) throw Error(ErrorCode::precondition, "global bound check needs c1 > 0");

  BoundCheckReport report;
  const double root = std::sqrt(e0);
  report.bound_u = c3 / c1 * root;
  report.bound_ut = c3 * root;
  auto ratio = [](double value, double bound) {
    if (bound == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return value / bound;
  };
  for (const NormSample& row : series) {
    const double ru = ratio(row.norm_u_gq, report.bound_u);
    const double rut = ratio(row.norm_ut_gq, report.bound_ut);
    report.worst_u_ratio = std::max(report.worst_u_ratio, ru);
    report.worst_ut_ratio = std::max(report.worst_ut_ratio, rut);
    if (ru > 1.0 + tol || rut > 1.0 + tol) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

}  // namespace dispersive
