#include "dispersive/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "dispersive/error.hpp"

namespace dispersive {

namespace {

// (1 - cos x) / x^2
double cosc(double x) {
  const double s = sinc(0.5 * x);
  return 0.5 * s * s;
}

// (1 - sin(x)/x) / x^2
double sinc_defect(double x) {
  const double x2 = x * x;
  if (std::fabs(x) < 0.5) {
    return 1.0 / 6.0 -
           x2 * (1.0 / 120.0 -
                 x2 * (1.0 / 5040.0 -
                       x2 * (1.0 / 362880.0 -
                             x2 * (1.0 / 39916800.0 - x2 * (1.0 / 6227020800.0 - x2 / 1307674368000.0)))));
  }
  return (1.0 - std::sin(x) / x) / x2;
}

void fill_rotation(const std::vector<double>& omega, double dt, std::vector<double>& c, std::vector<double>& s,
                   std::vector<double>& d) {
  const std::size_t n = omega.size();
  c.resize(n);
  s.resize(n);
  d.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = omega[k] * dt;
    const double sc = sinc(x);
    c[k] = std::cos(x);
    s[k] = dt * sc;
    d[k] = -omega[k] * omega[k] * dt * sc;
  }
}

double max_amplitude(const SpectrumField& c) {
  double m = 0.0;
  for (const auto& z : c.c) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

double sinc(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
  }
  return std::sin(x) / x;
}

PropagatorTable tables_from_omega(const GridSpec& grid, std::vector<double> omega, double dt) {
  PropagatorTable tab;
  tab.grid = grid;
  tab.dt = dt;
  tab.omega = std::move(omega);
  fill_rotation(tab.omega, dt, tab.cos_full, tab.sinc_full, tab.dsin_full);
  fill_rotation(tab.omega, 0.5 * dt, tab.cos_half, tab.sinc_half, tab.dsin_half);
  const std::size_t n = tab.omega.size();
  tab.wu0.resize(n);
  tab.wu1.resize(n);
  tab.wv0.resize(n);
  tab.wv1.resize(n);
  const double dt2 = dt * dt;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = tab.omega[k] * dt;
    const double c1 = cosc(x);
    const double c2 = sinc_defect(x);
    tab.wu0[k] = dt2 * (c1 - c2);
    tab.wu1[k] = dt2 * c2;
    tab.wv0[k] = dt * (sinc(x) - c1);
    tab.wv1[k] = dt * c1;
  }
  return tab;
}

PropagatorTable build_tables(const EquationSpec& eq, const GridSpec& grid, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::precondition, "step size must be positive");
  std::vector<double> omega(grid.n);
  for (int k = 0; k < grid.n; ++k) omega[k] = eval_symbols(eq, grid.xi(k)).omega;
  return tables_from_omega(grid, std::move(omega), dt);
}

PropagatorTable PropagatorTable::reversed() const { return tables_from_omega(grid, omega, -dt); }

FieldState apply_homogeneous(const FieldState& state, const PropagatorTable& tab) {
  FieldState out{state.t + tab.dt, state.u_hat, state.v_hat};
  const std::size_t n = tab.omega.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex u = state.u_hat.c[k];
    const Complex v = state.v_hat.c[k];
    out.u_hat.c[k] = tab.cos_full[k] * u + tab.sinc_full[k] * v;
    out.v_hat.c[k] = tab.dsin_full[k] * u + tab.cos_full[k] * v;
  }
  return out;
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::exp_midpoint ? "exp-midpoint" : "picard";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "exp-midpoint") return Scheme::exp_midpoint;
  if (name == "picard") return Scheme::picard;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

Forcing make_forcing(NonlinearForcing& nonlinear) {
  return [&nonlinear](double t, const SpectrumField& u_hat, SpectrumField& out) {
    nonlinear.evaluate(t, u_hat, out);
  };
}

StepResult step_exp_midpoint(const FieldState& state, const Forcing& forcing, const PropagatorTable& tab) {
  const std::size_t n = tab.omega.size();
  const double dt = tab.dt;

  SpectrumField u_mid = state.u_hat;
  for (std::size_t k = 0; k < n; ++k)
    u_mid.c[k] = tab.cos_half[k] * state.u_hat.c[k] + tab.sinc_half[k] * state.v_hat.c[k];

  SpectrumField f = SpectrumField::zeros(tab.grid);
  forcing(state.t + 0.5 * dt, u_mid, f);

  StepResult result{FieldState{state.t + dt, state.u_hat, state.v_hat}, {}};
  for (std::size_t k = 0; k < n; ++k) {
    const Complex u = state.u_hat.c[k];
    const Complex v = state.v_hat.c[k];
    const Complex impulse = dt * f.c[k];
    result.state.u_hat.c[k] = (tab.cos_full[k] * u + tab.sinc_full[k] * v) + tab.sinc_half[k] * impulse;
    result.state.v_hat.c[k] = (tab.dsin_full[k] * u + tab.cos_full[k] * v) + tab.cos_half[k] * impulse;
  }
  result.report = {dt, Scheme::exp_midpoint, 0, max_amplitude(result.state.u_hat)};
  return result;
}

StepResult step_picard(const FieldState& state, const Forcing& forcing, const PropagatorTable& tab,
                       const PicardOptions& options) {
  if (!(options.tol > 0.0) || options.kmax < 1)
    throw Error(ErrorCode::precondition, "picard needs tol > 0 and kmax >= 1");
  const std::size_t n = tab.omega.size();
  const double t_end = state.t + tab.dt;
  const double s_v = options.s - 1.0 - options.rho / 2.0;

  SpectrumField f0 = SpectrumField::zeros(tab.grid);
  forcing(state.t, state.u_hat, f0);
  const FieldState homogeneous = apply_homogeneous(state, tab);

  FieldState current = homogeneous;
  FieldState next = homogeneous;
  SpectrumField f1 = SpectrumField::zeros(tab.grid);
  SpectrumField du = SpectrumField::zeros(tab.grid);
  SpectrumField dv = SpectrumField::zeros(tab.grid);
  for (int k = 1; k <= options.kmax; ++k) {
    try {
      forcing(t_end, current.u_hat, f1);
    } catch (const OverflowError&) {
      throw Error(ErrorCode::contraction_failure,
                  "picard iterates diverged at iteration " + std::to_string(k) + "; reduce dt");
    }
    for (std::size_t m = 0; m < n; ++m) {
      next.u_hat.c[m] = homogeneous.u_hat.c[m] + (tab.wu0[m] * f0.c[m] + tab.wu1[m] * f1.c[m]);
      next.v_hat.c[m] = homogeneous.v_hat.c[m] + (tab.wv0[m] * f0.c[m] + tab.wv1[m] * f1.c[m]);
      du.c[m] = next.u_hat.c[m] - current.u_hat.c[m];
      dv.c[m] = next.v_hat.c[m] - current.v_hat.c[m];
    }
    const double diff = sobolev_norm(du, options.s) + sobolev_norm(dv, s_v);
    const double scale = 1.0 + sobolev_norm(next.u_hat, options.s) + sobolev_norm(next.v_hat, s_v);
    std::swap(current, next);
    if (!std::isfinite(diff) || !std::isfinite(scale)) break;
    if (diff <= options.tol * scale) {
      return {current, {tab.dt, Scheme::picard, k, max_amplitude(current.u_hat)}};
    }
  }
  throw Error(ErrorCode::contraction_failure,
              "picard iteration did not converge in " + std::to_string(options.kmax) + " iterations; reduce dt");
}

Stepper::Stepper(const EquationSpec& eq, const GridSpec& grid, double dt, Scheme scheme, PicardOptions options,
                 bool dealias)
    : scheme_(scheme),
      options_(options),
      nonlinear_(eq, grid, dealias),
      forcing_(make_forcing(nonlinear_)),
      table_(build_tables(eq, grid, dt)) {
  omega_ = table_.omega;
}

void Stepper::set_dt(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::precondition, "step size must be positive");
  table_ = tables_from_omega(table_.grid, omega_, dt);
}

StepResult Stepper::step(const FieldState& state) {
  if (scheme_ == Scheme::picard) return step_picard(state, forcing_, table_, options_);
  return step_exp_midpoint(state, forcing_, table_);
}

namespace {

Complex interpolate(const ForcingSamples& h, double t) {
  const auto count = static_cast<long>(h.values.size());
  const double pos = (t - h.t0) / h.spacing;
  long i0 = static_cast<long>(std::floor(pos)) - 1;
  i0 = std::clamp(i0, 0L, count - 4);
  Complex acc = 0.0;
  for (long a = 0; a < 4; ++a) {
    double w = 1.0;
    for (long b = 0; b < 4; ++b)
      if (b != a) w *= (pos - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    acc += w * h.values[static_cast<std::size_t>(i0 + a)];
  }
  return acc;
}

}  // namespace

std::pair<Complex, Complex> reference_mode_solution(double omega, double xi, double b_val, const ForcingSamples& h,
                                                    double t, Complex u0, Complex v0) {
  const double span = t - h.t0;
  if (!(h.spacing > 0.0) || h.values.size() < 4)
    throw Error(ErrorCode::precondition, "reference solution needs at least four forcing samples");
  if (!(span > 0.0) || h.spacing > span / 1000.0 * (1.0 + 1e-12))
    throw Error(ErrorCode::precondition, "forcing sample spacing must be <= t/1000");
  if (h.t0 + h.spacing * static_cast<double>(h.values.size() - 1) < t * (1.0 - 1e-12))
    throw Error(ErrorCode::precondition, "forcing samples do not cover the requested time");

  const double w2 = omega * omega;
  const double gain = -xi * xi * b_val;
  auto accel = [&](double tau, Complex u) { return -w2 * u + gain * interpolate(h, tau); };

  const long steps = static_cast<long>(std::ceil(span / (h.spacing / 10.0) - 1e-9));
  const double step = span / static_cast<double>(steps);
  Complex u = u0;
  Complex v = v0;
  double tau = h.t0;
  for (long i = 0; i < steps; ++i) {
    const Complex k1u = v;
    const Complex k1v = accel(tau, u);
    const Complex k2u = v + 0.5 * step * k1v;
    const Complex k2v = accel(tau + 0.5 * step, u + 0.5 * step * k1u);
    const Complex k3u = v + 0.5 * step * k2v;
    const Complex k3v = accel(tau + 0.5 * step, u + 0.5 * step * k2u);
    const Complex k4u = v + step * k3v;
    const Complex k4v = accel(tau + step, u + step * k3u);
    u += step / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    tau = h.t0 + static_cast<double>(i + 1) * step;
  }
  return {u, v};
}

}  // namespace dispersive
