#pragma once

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "dispersive/spectral.hpp"
#include "dispersive/symbols.hpp"

namespace dispersive {

// Per-mode factors of the exact linear flow for one step size, with
// omega_j = xi_j sqrt(l(xi_j)):
//   cos_*  = cos(omega dt)
//   sinc_* = sin(omega dt) / omega   (dt when omega = 0)
//   dsin_* = -omega sin(omega dt)
// The *_half arrays hold the same factors for dt/2. The w* arrays integrate
// the linear interpolant of the forcing across one step exactly:
//   u gains wu0 f(t) + wu1 f(t+dt), v gains wv0 f(t) + wv1 f(t+dt).
struct PropagatorTable {
  GridSpec grid;
  double dt = 0.0;
  std::vector<double> omega;
  std::vector<double> cos_full, sinc_full, dsin_full;
  std::vector<double> cos_half, sinc_half, dsin_half;
  std::vector<double> wu0, wu1, wv0, wv1;

  // Table for -dt; applying it undoes apply_homogeneous with this table.
  PropagatorTable reversed() const;
};

// Throws invalid-symbol if l < 0 at a grid frequency, precondition if dt <= 0.
PropagatorTable build_tables(const EquationSpec& eq, const GridSpec& grid, double dt);

// Factors from a precomputed dispersion relation; dt may be negative.
PropagatorTable tables_from_omega(const GridSpec& grid, std::vector<double> omega, double dt);

// sin(x)/x with a Taylor branch near zero.
double sinc(double x);

FieldState apply_homogeneous(const FieldState& state, const PropagatorTable& tab);

enum class Scheme { exp_midpoint, picard };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct StepReport {
  double dt = 0.0;
  Scheme scheme = Scheme::exp_midpoint;
  int picard_iterations = 0;
  double max_amplitude = 0.0;
};

struct StepResult {
  FieldState state;
  StepReport report;
};

// Forcing spectrum of the mode equations u_tt + omega^2 u = f(t, u).
using Forcing = std::function<void(double t, const SpectrumField& u_hat, SpectrumField& out)>;

Forcing make_forcing(NonlinearForcing& nonlinear);

// Half homogeneous step, impulse dt f(u_mid), half homogeneous step.
StepResult step_exp_midpoint(const FieldState& state, const Forcing& forcing, const PropagatorTable& tab);

struct PicardOptions {
  double tol = 1e-12;
  int kmax = 50;
  // Iterates are compared in ||du||_s + ||dv||_{s-1-rho/2}.
  double s = 1.0;
  double rho = 2.0;
};

// Fixed-point iteration of the Duhamel formula over one step, the forcing
// interpolated linearly between the step endpoints. Throws
// contraction-failure when kmax iterations do not converge.
StepResult step_picard(const FieldState& state, const Forcing& forcing, const PropagatorTable& tab,
                       const PicardOptions& options);

// Bundles forcing, tables and scheme for repeated stepping of one equation.
class Stepper {
 public:
  Stepper(const EquationSpec& eq, const GridSpec& grid, double dt, Scheme scheme, PicardOptions options,
          bool dealias);
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  StepResult step(const FieldState& state);
  double dt() const noexcept { return table_.dt; }
  void set_dt(double dt);
  Scheme scheme() const noexcept { return scheme_; }

 private:
  Scheme scheme_;
  PicardOptions options_;
  NonlinearForcing nonlinear_;
  Forcing forcing_;
  std::vector<double> omega_;
  PropagatorTable table_;
};

// Uniformly sampled forcing history h(t0 + i * spacing).
struct ForcingSamples {
  double t0 = 0.0;
  double spacing = 0.0;
  std::vector<Complex> values;
};

// High-accuracy oracle for u'' + omega^2 u = -xi^2 b h(t): classical RK4 at a
// tenth of the sample spacing, h interpolated by cubic Lagrange polynomials.
// Requires spacing <= t / 1000.
std::pair<Complex, Complex> reference_mode_solution(double omega, double xi, double b_val,
                                                    const ForcingSamples& h, double t, Complex u0,
                                                    Complex v0);

}  // namespace dispersive
