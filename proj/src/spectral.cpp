#include "dispersive/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>

#include "dispersive/error.hpp"

namespace dispersive {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double sign_of_slot(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double GridSpec::xi(int k) const { return std::numbers::pi * mode(k) / half_length; }

std::vector<double> GridSpec::frequencies() const {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = xi(k);
  return out;
}

GridSpec make_grid(int n, double half_length) {
  if (n < 16 || !is_power_of_two(n)) throw ConfigError("grid N must be a power of two >= 16, got " + std::to_string(n));
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ConfigError("grid X must be positive and finite");
  return GridSpec{n, half_length};
}

struct FourierTransform::Impl {
  GridSpec grid;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Impl(const GridSpec& g) : grid(g) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(static_cast<std::size_t>(g.n));
    forward = fftw_plan_dft_1d(g.n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(g.n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(backward);
    fftw_destroy_plan(forward);
    fftw_free(buffer);
  }
};

FourierTransform::FourierTransform(const GridSpec& grid) : impl_(std::make_unique<Impl>(grid)) {}
FourierTransform::~FourierTransform() = default;
FourierTransform::FourierTransform(FourierTransform&&) noexcept = default;
FourierTransform& FourierTransform::operator=(FourierTransform&&) noexcept = default;

const GridSpec& FourierTransform::grid() const noexcept { return impl_->grid; }

SpectrumField FourierTransform::analyze(std::span<const double> values) {
  const int n = impl_->grid.n;
  if (static_cast<int>(values.size()) != n) throw Error(ErrorCode::precondition, "field size does not match grid");
  fftw_complex* buf = impl_->buffer;
  for (int i = 0; i < n; ++i) {
    buf[i][0] = values[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(impl_->forward);
  SpectrumField out = SpectrumField::zeros(impl_->grid);
  const double inv_n = 1.0 / n;
  for (int k = 0; k < n; ++k) {
    // exp(-i xi_j x_n) = (-1)^j exp(-2 pi i j n / N) since x_0 = -X.
    const double w = sign_of_slot(k) * inv_n;
    out.c[k] = Complex(buf[k][0] * w, buf[k][1] * w);
  }
  return out;
}

std::vector<Complex> FourierTransform::synthesize_complex(const SpectrumField& c) {
  const int n = impl_->grid.n;
  if (!(c.grid == impl_->grid)) throw Error(ErrorCode::precondition, "spectrum grid does not match transform");
  fftw_complex* buf = impl_->buffer;
  for (int k = 0; k < n; ++k) {
    const double w = sign_of_slot(k);
    buf[k][0] = c.c[k].real() * w;
    buf[k][1] = c.c[k].imag() * w;
  }
  fftw_execute(impl_->backward);
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) out[i] = Complex(buf[i][0], buf[i][1]);
  return out;
}

PhysicalField FourierTransform::synthesize(const SpectrumField& c) {
  const auto z = synthesize_complex(c);
  PhysicalField f{impl_->grid, std::vector<double>(z.size())};
  std::transform(z.begin(), z.end(), f.values.begin(), [](const Complex& v) { return v.real(); });
  return f;
}

std::vector<double> sample_multiplier(const GridSpec& grid, const std::function<double(double)>& m) {
  std::vector<double> out(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double xi = grid.xi(k);
    const double v = m(xi);
    if (!std::isfinite(v))
      throw Error(ErrorCode::multiplier_singularity, "multiplier not finite at xi = " + std::to_string(xi));
    out[k] = v;
  }
  return out;
}

SpectrumField apply_multiplier(const SpectrumField& c, std::span<const double> m) {
  if (m.size() != c.c.size()) throw Error(ErrorCode::precondition, "multiplier size does not match spectrum");
  SpectrumField out = c;
  for (std::size_t k = 0; k < m.size(); ++k) out.c[k] *= m[k];
  return out;
}

SpectrumField apply_multiplier(const SpectrumField& c, const std::function<double(double)>& m) {
  const auto sampled = sample_multiplier(c.grid, m);
  return apply_multiplier(c, std::span<const double>(sampled));
}

double sobolev_norm(const SpectrumField& c, double s) {
  double acc = 0.0;
  for (int k = 0; k < c.grid.n; ++k) {
    const double xi = c.grid.xi(k);
    const double weight = s == 0.0 ? 1.0 : std::pow(1.0 + xi * xi, s);
    acc += weight * std::norm(c.c[k]);
  }
  return std::sqrt(2.0 * c.grid.half_length * acc);
}

double l2_inner(const SpectrumField& a, const SpectrumField& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.c.size(); ++k) acc += (std::conj(a.c[k]) * b.c[k]).real();
  return 2.0 * a.grid.half_length * acc;
}

MeanProjection project_mean_zero(const SpectrumField& c) {
  MeanProjection out{c, c.c[0].real()};
  out.field.c[0] = 0.0;
  return out;
}

void truncate_two_thirds(SpectrumField& c) {
  const int cutoff = c.grid.dealias_cutoff();
  for (int k = 0; k < c.grid.n; ++k)
    if (std::abs(c.grid.mode(k)) > cutoff) c.c[k] = 0.0;
}

bool default_dealias(const Nonlinearity& nl) { return nl.is_polynomial(); }

namespace {

bool identically_zero(const Nonlinearity& nl) {
  if (nl.kind == Nonlinearity::Kind::polynomial)
    return std::all_of(nl.coeffs.begin(), nl.coeffs.end(), [](double c) { return c == 0.0; });
  return nl.a == 0.0;
}

}  // namespace

NonlinearForcing::NonlinearForcing(const EquationSpec& eq, const GridSpec& grid, bool dealias)
    : grid_(grid),
      nl_(eq.g),
      dealias_(dealias),
      zero_(identically_zero(eq.g)),
      factor_(grid.n),
      transform_(grid),
      scratch_(SpectrumField::zeros(grid)),
      pointwise_(grid.n) {
  for (int k = 0; k < grid.n; ++k) {
    const double xi = grid.xi(k);
    const double b = eq.b(xi);
    factor_[k] = -xi * xi * b;
    if (dealias_ && std::abs(grid.mode(k)) > grid.dealias_cutoff()) factor_[k] = 0.0;
  }
}

void NonlinearForcing::evaluate(double t, const SpectrumField& u_hat, SpectrumField& out) {
  out.grid = grid_;
  out.c.assign(grid_.n, Complex(0.0, 0.0));
  if (zero_) return;
  const SpectrumField* source = &u_hat;
  if (dealias_) {
    scratch_ = u_hat;
    truncate_two_thirds(scratch_);
    source = &scratch_;
  }
  const auto u = transform_.synthesize(*source);
  for (int i = 0; i < grid_.n; ++i) {
    const double gi = nl_.g(u.values[i]);
    if (!std::isfinite(gi)) throw OverflowError(t, "g(u) is not finite at t = " + format_double(t));
    pointwise_[i] = gi;
  }
  SpectrumField gh = transform_.analyze(pointwise_);
  for (int k = 0; k < grid_.n; ++k) out.c[k] = factor_[k] * gh.c[k];
}

SpectrumField NonlinearForcing::operator()(double t, const SpectrumField& u_hat) {
  SpectrumField out;
  evaluate(t, u_hat, out);
  return out;
}

SpectrumField nonlinear_rhs(const FieldState& state, const EquationSpec& eq, bool dealias) {
  NonlinearForcing forcing(eq, state.u_hat.grid, dealias);
  return forcing(state.t, state.u_hat);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string snapshot_csv(const FieldState& state, FourierTransform& transform) {
  const auto u = transform.synthesize(state.u_hat);
  const auto ut = transform.synthesize(state.v_hat);
  const GridSpec& grid = state.u_hat.grid;
  std::string out = "x,u,ut\n";
  for (int i = 0; i < grid.n; ++i) {
    out += format_double(grid.x(i));
    out += ',';
    out += format_double(u.values[i]);
    out += ',';
    out += format_double(ut.values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace dispersive
