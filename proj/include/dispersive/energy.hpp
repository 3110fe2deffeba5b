#pragma once

#include <span>

#include "dispersive/spectral.hpp"
#include "dispersive/symbols.hpp"

namespace dispersive {

// E = ||B^{-1/2} Lambda^{-1} u_t||^2 + ||B^{-1/2} K u||^2 + 2 int G(u) dx,
// with K = L^{1/2}. For b = 1 this is the unweighted energy.
struct EnergyLedger {
  double t = 0.0;
  double total = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double potential = 0.0;
};

// Tolerance on the mean mode relative to the l2 size of the coefficients.
inline constexpr double kMeanModeTolerance = 1e-10;

// Multiplier |xi|^{-1} with the mean mode dropped. Throws mean-mode-error if
// |c_0| exceeds kMeanModeTolerance * ||c||.
SpectrumField lambda_inv(const SpectrumField& c);

// Multiplier b(xi)^{-1/2}. Throws positivity-violation if b <= 0 on the grid.
SpectrumField b_inv_sqrt(const SpectrumField& c, const EquationSpec& eq);

EnergyLedger energy(const FieldState& state, const EquationSpec& eq, FourierTransform& transform);
EnergyLedger energy(const FieldState& state, const EquationSpec& eq);

// Norms tracked along a run (u_t norms use the spectrum of u_t):
//   norm_u_s    ||u||_s             norm_ut_s1  ||u_t||_{s-1-rho/2}
//   norm_u_gq   ||u||_{rho/2+r/2}   norm_ut_gq  ||u_t||_{r/2-1}
//   linf        max over the grid of |u|
struct NormSample {
  double t = 0.0;
  double norm_u_s = 0.0;
  double norm_ut_s1 = 0.0;
  double norm_u_gq = 0.0;
  double norm_ut_gq = 0.0;
  double linf = 0.0;

  // Quantity watched by the continuation criterion.
  double continuation() const { return norm_u_s + norm_ut_s1; }
};

// Throws OverflowError if any norm is not finite.
NormSample norm_series_sample(const FieldState& state, const EquationSpec& eq, double s,
                              FourierTransform& transform);

struct BoundCheckReport {
  bool pass = true;
  double bound_u = 0.0;
  double bound_ut = 0.0;
  double worst_u_ratio = 0.0;
  double worst_ut_ratio = 0.0;
  int violations = 0;

  double worst_ratio() const { return worst_u_ratio > worst_ut_ratio ? worst_u_ratio : worst_ut_ratio; }
};

// Checks ||u||_{r/2+rho/2} <= (c3/c1) sqrt(E0) (1+tol) and
// ||u_t||_{r/2-1} <= c3 sqrt(E0) (1+tol) at every sample. Requires G >= 0 for
// the equation and E0 >= 0 (precondition error otherwise).
BoundCheckReport global_bound_check(std::span<const NormSample> series, const EquationSpec& eq, double c1,
                                    double c3, double e0, double tol = 1e-6);

}  // namespace dispersive
