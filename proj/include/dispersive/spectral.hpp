#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dispersive/symbols.hpp"

namespace dispersive {

using Complex = std::complex<double>;

// Periodic box [-X, X) with N points. Spectral arrays are stored in FFT order:
// storage slot k holds mode j = k for k < N/2 and j = k - N otherwise, so the
// frequency of slot k is xi = pi j / X.
struct GridSpec {
  int n = 0;
  double half_length = 0.0;

  double dx() const { return 2.0 * half_length / n; }
  double x(int i) const { return -half_length + dx() * i; }
  int mode(int k) const { return k < n / 2 ? k : k - n; }
  int slot(int j) const { return j >= 0 ? j : j + n; }
  double xi(int k) const;
  // Frequencies in storage order.
  std::vector<double> frequencies() const;
  // Largest |j| kept by the 2/3 rule.
  int dealias_cutoff() const { return n / 3; }

  bool operator==(const GridSpec&) const = default;
};

// Throws config-error unless N is a power of two >= 16 and X > 0.
GridSpec make_grid(int n, double half_length);

struct PhysicalField {
  GridSpec grid;
  std::vector<double> values;
};

struct SpectrumField {
  GridSpec grid;
  std::vector<Complex> c;

  static SpectrumField zeros(const GridSpec& grid) { return {grid, std::vector<Complex>(grid.n)}; }
  Complex& mode(int j) { return c[grid.slot(j)]; }
  const Complex& mode(int j) const { return c[grid.slot(j)]; }
};

struct FieldState {
  double t = 0.0;
  SpectrumField u_hat;
  SpectrumField v_hat;
};

// Owns FFTW plans and buffers for one grid. Not shareable between threads;
// create one per worker.
//   analyze:    c_j = (1/N) sum_n f(x_n) exp(-i xi_j x_n)
//   synthesize: f(x_n) = sum_j c_j exp(i xi_j x_n)
class FourierTransform {
 public:
  explicit FourierTransform(const GridSpec& grid);
  ~FourierTransform();
  FourierTransform(FourierTransform&&) noexcept;
  FourierTransform& operator=(FourierTransform&&) noexcept;
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const GridSpec& grid() const noexcept;

  SpectrumField analyze(std::span<const double> values);
  SpectrumField analyze(const PhysicalField& f) { return analyze(f.values); }
  // Real part of the inverse transform.
  PhysicalField synthesize(const SpectrumField& c);
  std::vector<Complex> synthesize_complex(const SpectrumField& c);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Samples m at every grid frequency (storage order); throws
// multiplier-singularity if a value is not finite.
std::vector<double> sample_multiplier(const GridSpec& grid, const std::function<double(double)>& m);

SpectrumField apply_multiplier(const SpectrumField& c, std::span<const double> m);
SpectrumField apply_multiplier(const SpectrumField& c, const std::function<double(double)>& m);

// sqrt(2X sum_j (1 + xi_j^2)^s |c_j|^2)
double sobolev_norm(const SpectrumField& c, double s);

// 2X Re sum_j conj(a_j) b_j, the quadrature of the L2 inner product.
double l2_inner(const SpectrumField& a, const SpectrumField& b);

struct MeanProjection {
  SpectrumField field;
  double removed_mean = 0.0;
};

MeanProjection project_mean_zero(const SpectrumField& c);

// Zeroes every mode with |j| > N/3.
void truncate_two_thirds(SpectrumField& c);

// Default dealiasing policy: on for polynomial g.
bool default_dealias(const Nonlinearity& nl);

// Forcing spectrum f_j = -xi_j^2 b(xi_j) F[g(u)]_j for a fixed equation and
// grid. Holds its own transform.
class NonlinearForcing {
 public:
  NonlinearForcing(const EquationSpec& eq, const GridSpec& grid, bool dealias);

  // Throws OverflowError carrying t if g(u) is not finite on the grid.
  SpectrumField operator()(double t, const SpectrumField& u_hat);
  void evaluate(double t, const SpectrumField& u_hat, SpectrumField& out);

  bool dealias() const noexcept { return dealias_; }
  const Nonlinearity& nonlinearity() const noexcept { return nl_; }

 private:
  GridSpec grid_;
  Nonlinearity nl_;
  bool dealias_;
  bool zero_;
  std::vector<double> factor_;
  FourierTransform transform_;
  SpectrumField scratch_;
  std::vector<double> pointwise_;
};

SpectrumField nonlinear_rhs(const FieldState& state, const EquationSpec& eq, bool dealias);

// CSV with header x,u,ut and 17 significant digits per value.
std::string snapshot_csv(const FieldState& state, FourierTransform& transform);

std::string format_double(double v);

}  // namespace dispersive
