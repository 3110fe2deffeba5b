#include "dispersive/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <json.hpp>

#include "dispersive/error.hpp"

namespace dispersive {

namespace {

// ||w||^2 and <w, z> with w = B^{-1/2} Lambda^{-1} u, z = B^{-1/2} Lambda^{-1} u_t.
struct WeightedPair {
  double uu;
  double uv;
};

WeightedPair weighted_pair(const FieldState& state, const EquationSpec& eq) {
  const SpectrumField wu = b_inv_sqrt(lambda_inv(state.u_hat), eq);
  const SpectrumField wv = b_inv_sqrt(lambda_inv(state.v_hat), eq);
  return {l2_inner(wu, wu), l2_inner(wu, wv)};
}

struct HValues {
  double h;
  double hp;
};

HValues h_values(const WeightedPair& p, double b0, double t0, double t) {
  const double shifted = t + t0;
  return {p.uu + b0 * shifted * shifted, 2.0 * p.uv + 2.0 * b0 * shifted};
}

std::vector<double> log_space(double lo, double hi, int count) {
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

struct Candidate {
  double t1 = std::numeric_limits<double>::infinity();
  double b0 = 0.0;
  double t0 = 0.0;
};

constexpr double kT0Max = 1e4;
constexpr double kT0Floor = 1e-8;

double t0_floor(const WeightedPair& p, double b0) { return std::max(-p.uv / b0, kT0Floor); }

void consider(Candidate& best, const WeightedPair& p, double nu, double b0, double t0) {
  const HValues hv = h_values(p, b0, t0, 0.0);
  if (!(hv.h > 0.0) || !(hv.hp > 0.0)) return;
  const double t1 = hv.h / (nu * hv.hp);
  if (t1 < best.t1) best = {t1, b0, t0};
}

}  // namespace

double initial_energy(const FieldState& state0, const EquationSpec& eq, FourierTransform& transform) {
  return energy(state0, eq, transform).total;
}

BlowupCertificate make_certificate(const FieldState& state0, const EquationSpec& eq, double nu,
                                   FourierTransform& transform) {
  BlowupCertificate cert;
  cert.nu = nu;
  if (!(nu > 0.0)) {
    cert.reason = "nu-must-be-positive";
    return cert;
  }

  const auto phi = transform.synthesize(state0.u_hat);
  double peak = 0.0;
  for (double v : phi.values) peak = std::max(peak, std::fabs(v));
  const double p_max = std::max(2.0, 1.5 * peak);
  std::vector<double> ps;
  for (int i = -1000; i <= 1000; ++i) ps.push_back(p_max * i / 1000.0);
  const GrowthReport growth = growth_condition_margin(eq.g, nu, ps);
  cert.margin = growth.worst_margin;

  WeightedPair pair{};
  try {
    cert.e0 = initial_energy(state0, eq, transform);
    pair = weighted_pair(state0, eq);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::mean_mode_error) throw;
    cert.reason = "mean-mode-error";
    return cert;
  }

  if (!growth.holds) {
    cert.reason = "growth-condition";
    return cert;
  }
  if (!(cert.e0 < 0.0)) {
    cert.reason = "negative-energy-required";
    return cert;
  }

  // Coarse grid over b0 in {-E0 k/32} and log-spaced t0, then one refinement
  // pass around the best cell.
  const double b0_max = -cert.e0;
  constexpr int kB = 32;
  constexpr int kT = 200;
  Candidate best;
  int best_k = -1;
  for (int k = 1; k <= kB; ++k) {
    const double b0 = b0_max * k / kB;
    const double lo = t0_floor(pair, b0) * (1.0 + 1e-6);
    if (lo >= kT0Max) continue;
    for (double t0 : log_space(lo, kT0Max, kT)) {
      const double before = best.t1;
      consider(best, pair, nu, b0, t0);
      if (best.t1 < before) best_k = k;
    }
  }
  if (best_k < 0) {
    cert.reason = "no-admissible-t0";
    return cert;
  }

  const double b_lo = b0_max * std::max(best_k - 1, 1) / kB;
  const double b_hi = b0_max * std::min(best_k + 1, kB) / kB;
  const double grid_lo = t0_floor(pair, b0_max * best_k / kB) * (1.0 + 1e-6);
  const double ratio = std::pow(kT0Max / grid_lo, 1.0 / (kT - 1));
  const double t_lo = best.t0 / ratio;
  const double t_hi = std::min(best.t0 * ratio, kT0Max);
  constexpr int kRefine = 33;
  for (int i = 0; i < kRefine; ++i) {
    const double b0 = b_lo + (b_hi - b_lo) * i / (kRefine - 1);
    const double lo = std::max(t_lo, t0_floor(pair, b0) * (1.0 + 1e-6));
    if (lo >= t_hi) continue;
    for (double t0 : log_space(lo, t_hi, 2 * kRefine - 1)) consider(best, pair, nu, b0, t0);
  }

  cert.b0 = best.b0;
  cert.t0 = best.t0;
  const HValues hv = h_values(pair, cert.b0, cert.t0, 0.0);
  cert.h0 = hv.h;
  cert.hp0 = hv.hp;
  cert.t1_bound = cert.h0 / (cert.nu * cert.hp0);
  cert.valid = true;
  return cert;
}

std::string certificate_json(const BlowupCertificate& cert) {
  nlohmann::ordered_json j;
  j["nu"] = cert.nu;
  j["b0"] = cert.b0;
  j["t0"] = cert.t0;
  j["E0"] = cert.e0;
  j["H0"] = cert.h0;
  j["Hp0"] = cert.hp0;
  j["t1_bound"] = cert.t1_bound;
  j["margin"] = cert.margin;
  j["valid"] = cert.valid;
  j["reason"] = cert.reason;
  return j.dump(2) + "\n";
}

HTracePoint h_trace(const FieldState& state, const EquationSpec& eq, const BlowupCertificate& cert) {
  const HValues hv = h_values(weighted_pair(state, eq), cert.b0, cert.t0, state.t);
  return {state.t, hv.h, hv.hp, std::numeric_limits<double>::quiet_NaN()};
}

void fill_convexity_residuals(std::span<HTracePoint> trace, double nu) {
  const std::size_t n = trace.size();
  for (auto& p : trace) p.convexity_residual = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = trace[i].t - trace[i - 1].t;
    const double h2 = trace[i + 1].t - trace[i].t;
    if (!(h1 > 0.0) || !(h2 > 0.0)) continue;
    const double second = -h2 / (h1 * (h1 + h2)) * trace[i - 1].hp + (h2 - h1) / (h1 * h2) * trace[i].hp +
                          h1 / (h2 * (h1 + h2)) * trace[i + 1].hp;
    trace[i].convexity_residual = trace[i].h * second - (1.0 + nu) * trace[i].hp * trace[i].hp;
  }
}

std::string_view to_string(BlowupTrigger trigger) {
  switch (trigger) {
    case BlowupTrigger::norm_threshold: return "norm-threshold";
    case BlowupTrigger::overflow: return "overflow";
    case BlowupTrigger::picard_failure: return "picard-failure";
  }
  return "unknown";
}

std::optional<BlowupEvent> detect_blowup(std::span<const NormSample> series, double threshold) {
  if (series.empty()) return std::nullopt;
  if (!(threshold > series.front().continuation()))
    throw Error(ErrorCode::precondition, "blow-up threshold must exceed the initial norm");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].continuation() > threshold)
      return BlowupEvent{series[i].t, BlowupTrigger::norm_threshold, series[i - 1]};
  }
  return std::nullopt;
}

}  // namespace dispersive
