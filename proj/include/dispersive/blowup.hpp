#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "dispersive/energy.hpp"
#include "dispersive/spectral.hpp"
#include "dispersive/symbols.hpp"

namespace dispersive {

// Hypotheses and bound of the concavity argument for
//   H(t) = ||B^{-1/2} Lambda^{-1} u||^2 + b0 (t + t0)^2.
// When valid: 0 < b0 <= -E0, H0 > 0, Hp0 > 0 and H blows up no later than
// t1_bound = H0 / (nu Hp0).
struct BlowupCertificate {
  double nu = 0.0;
  double b0 = 0.0;
  double t0 = 0.0;
  double e0 = 0.0;
  double h0 = 0.0;
  double hp0 = 0.0;
  double t1_bound = 0.0;
  double margin = 0.0;
  bool valid = false;
  std::string reason;
};

double initial_energy(const FieldState& state0, const EquationSpec& eq, FourierTransform& transform);

// Never throws for failed hypotheses; the certificate carries the reason
// (nu-must-be-positive, growth-condition, negative-energy-required,
// mean-mode-error, no-admissible-t0).
BlowupCertificate make_certificate(const FieldState& state0, const EquationSpec& eq, double nu,
                                   FourierTransform& transform);

std::string certificate_json(const BlowupCertificate& cert);

struct HTracePoint {
  double t = 0.0;
  double h = 0.0;
  double hp = 0.0;
  // H H'' - (1 + nu) H'^2, NaN until neighbours exist.
  double convexity_residual = 0.0;
};

// Throws mean-mode-error for data with a nonzero mean.
HTracePoint h_trace(const FieldState& state, const EquationSpec& eq, const BlowupCertificate& cert);

// Fills convexity residuals of interior points, H'' from centered differences
// of the analytic H' series (nonuniform spacing allowed). End points get NaN.
void fill_convexity_residuals(std::span<HTracePoint> trace, double nu);

enum class BlowupTrigger { norm_threshold, overflow, picard_failure };

std::string_view to_string(BlowupTrigger trigger);

struct BlowupEvent {
  double t_escape = 0.0;
  BlowupTrigger trigger = BlowupTrigger::norm_threshold;
  NormSample last_finite;
};

// First sample whose ||u||_s + ||u_t||_{s-1-rho/2} exceeds threshold.
// Precondition: threshold exceeds the value at the first sample.
std::optional<BlowupEvent> detect_blowup(std::span<const NormSample> series, double threshold);

}  // namespace dispersive
