#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <doctest.h>

#include "dispersive/error.hpp"
#include "dispersive/spectral.hpp"

namespace testing {

inline dispersive::ErrorCode error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const dispersive::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return dispersive::ErrorCode::precondition;
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// Smooth random real field: a few low modes with random amplitudes.
inline std::vector<double> random_field(const dispersive::GridSpec& grid, std::mt19937_64& rng, int modes = 6,
                                        bool mean_zero = false) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<double> f(grid.n, mean_zero ? 0.0 : amp(rng));
  for (int m = 1; m <= modes; ++m) {
    const double a = amp(rng), b = amp(rng);
    const double k = M_PI * m / grid.half_length;
    for (int i = 0; i < grid.n; ++i) f[i] += a * std::cos(k * grid.x(i)) + b * std::sin(k * grid.x(i));
  }
  return f;
}

inline double max_abs_diff(const dispersive::SpectrumField& a, const dispersive::SpectrumField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.c.size(); ++k) m = std::max(m, std::abs(a.c[k] - b.c[k]));
  return m;
}

inline double max_abs(const dispersive::SpectrumField& a) {
  double m = 0.0;
  for (auto c : a.c) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace testing
