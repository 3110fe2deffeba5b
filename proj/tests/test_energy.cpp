#include <cmath>
#include <random>

#include <doctest.h>

#include "dispersive/energy.hpp"
#include "dispersive/propagator.hpp"
#include "dispersive/symbols.hpp"
#include "support.hpp"

using namespace dispersive;
using testing::error_code_of;

namespace {

std::vector<double> sample(const GridSpec& grid, double (*f)(double)) {
  std::vector<double> v(grid.n);
  for (int i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
  return v;
}

FieldState gaussian_state(const GridSpec& grid, double amplitude, double width) {
  FourierTransform tr(grid);
  std::vector<double> phi(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    phi[i] = amplitude * (-2.0 * x / (width * width)) * std::exp(-x * x / (width * width));
  }
  auto u = tr.analyze(phi);
  u.c[0] = 0.0;
  return {0.0, u, SpectrumField::zeros(grid)};
}

struct Trajectory {
  std::vector<NormSample> norms;
  std::vector<EnergyLedger> energies;
};

Trajectory integrate(const EquationSpec& eq, const GridSpec& grid, FieldState st, double dt, double T, int stride) {
  Stepper stepper(eq, grid, dt, Scheme::exp_midpoint, {}, true);
  FourierTransform tr(grid);
  Trajectory out;
  const int n = static_cast<int>(std::lround(T / dt));
  for (int i = 0; i <= n; ++i) {
    if (i % stride == 0 || i == n) {
      out.norms.push_back(norm_series_sample(st, eq, 1.0, tr));
      out.energies.push_back(energy(st, eq, tr));
    }
    if (i < n) st = stepper.step(st).state;
  }
  return out;
}

double drift(const Trajectory& tr) {
  const double e0 = tr.energies.front().total;
  double worst = 0.0;
  for (const auto& e : tr.energies) worst = std::max(worst, std::fabs(e.total - e0) / std::max(std::fabs(e0), 1.0));
  return worst;
}

}  // namespace

TEST_CASE("lambda_inv") {
  const auto grid = make_grid(16, M_PI);
  FourierTransform tr(grid);
  const auto c1 = tr.analyze(sample(grid, [](double x) { return std::cos(x); }));
  CHECK(testing::max_abs_diff(lambda_inv(c1), c1) <= 1e-16);

  const auto c2 = tr.analyze(sample(grid, [](double x) { return std::cos(2.0 * x); }));
  auto half = c2;
  for (auto& c : half.c) c *= 0.5;
  CHECK(testing::max_abs_diff(lambda_inv(c2), half) <= 1e-16);

  const auto constant = tr.analyze(std::vector<double>(16, 1.0));
  CHECK(error_code_of([&] { lambda_inv(constant); }) == ErrorCode::mean_mode_error);
}

TEST_CASE("b_inv_sqrt") {
  const auto grid = make_grid(16, M_PI);
  FourierTransform tr(grid);
  const auto c = tr.analyze(sample(grid, [](double x) { return 1.0 + std::cos(x); }));
  CHECK(testing::max_abs_diff(b_inv_sqrt(c, make_preset("boussinesq")), c) == 0.0);

  const auto out = b_inv_sqrt(c, make_preset("double-dispersion"));
  CHECK(std::abs(out.mode(1) - std::sqrt(2.0) * c.mode(1)) <= 1e-15);
  CHECK(out.mode(0) == c.mode(0));

  auto neg = make_preset("boussinesq");
  neg.b = SymbolExpr::constant(-1.0);
  CHECK(error_code_of([&] { b_inv_sqrt(c, neg); }) == ErrorCode::positivity_violation);
}

TEST_CASE("energy examples") {
  const auto grid = make_grid(16, M_PI);
  FourierTransform tr(grid);
  const double eps = 0.01;
  auto u = tr.analyze(sample(grid, [](double x) { return std::cos(x); }));
  for (auto& c : u.c) c *= eps;
  FieldState st{0.0, u, SpectrumField::zeros(grid)};

  auto e = energy(st, make_preset("boussinesq"), tr);
  CHECK(e.kinetic == 0.0);
  CHECK(e.elastic == doctest::Approx(2.0 * M_PI * eps * eps).epsilon(1e-13));
  CHECK(std::fabs(e.potential) <= 1e-18);
  CHECK(e.total == e.kinetic + e.elastic + e.potential);

  FieldState zero{0.0, SpectrumField::zeros(grid), SpectrumField::zeros(grid)};
  e = energy(zero, make_preset("boussinesq"), tr);
  CHECK(e.total == 0.0);

  auto focusing = make_preset("boussinesq");
  focusing.g = Nonlinearity::odd_power(-1.0, 3.0);
  FieldState unit{0.0, tr.analyze(sample(grid, [](double x) { return std::cos(x); })), SpectrumField::zeros(grid)};
  e = energy(unit, focusing, tr);
  // 2 int G = -(1/2) int cos^4 = -(1/2)(3 pi / 4)
  CHECK(e.potential == doctest::Approx(-3.0 * M_PI / 8.0).epsilon(1e-14));
  CHECK(e.elastic == doctest::Approx(2.0 * M_PI).epsilon(1e-14));

  FieldState with_mean = unit;
  with_mean.v_hat.mode(0) = 0.1;
  CHECK(error_code_of([&] { energy(with_mean, focusing, tr); }) == ErrorCode::mean_mode_error);
}

TEST_CASE("energy with b = 1 matches the unweighted formula") {
  std::mt19937_64 rng(41);
  const auto grid = make_grid(128, 20.0);
  FourierTransform tr(grid);
  auto eq = make_preset("boussinesq");
  eq.g = Nonlinearity::odd_power(1.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    FieldState st{0.0, tr.analyze(testing::random_field(grid, rng, 10, true)),
                  tr.analyze(testing::random_field(grid, rng, 10, true))};
    st.u_hat.c[0] = 0.0;
    st.v_hat.c[0] = 0.0;
    double kin = 0.0, ela = 0.0;
    for (int k = 1; k < grid.n; ++k) {
      const double xi = grid.xi(k);
      kin += std::norm(st.v_hat.c[k]) / (xi * xi);
    }
    for (int k = 0; k < grid.n; ++k) {
      const double xi = grid.xi(k);
      ela += (1.0 + xi * xi) * std::norm(st.u_hat.c[k]);
    }
    kin *= 2.0 * grid.half_length;
    ela *= 2.0 * grid.half_length;
    const auto u = tr.synthesize(st.u_hat);
    double pot = 0.0;
    for (double v : u.values) pot += 0.5 * v * v * v * v;
    pot *= grid.dx();
    const auto e = energy(st, eq, tr);
    CHECK(std::fabs(e.kinetic - kin) <= 1e-14 * std::max(kin, 1.0));
    CHECK(std::fabs(e.elastic - ela) <= 1e-14 * std::max(ela, 1.0));
    CHECK(std::fabs(e.total - (kin + ela + pot)) <= 1e-14 * std::max(kin + ela + pot, 1.0));
  }
}

TEST_CASE("weighted elastic norm two ways") {
  std::mt19937_64 rng(43);
  const auto grid = make_grid(128, 20.0);
  FourierTransform tr(grid);
  for (auto name : {"boussinesq", "improved-boussinesq", "double-dispersion"}) {
    const auto eq = make_preset(name);
    for (int trial = 0; trial < 10; ++trial) {
      const auto u = tr.analyze(testing::random_field(grid, rng, 12));
      const auto combined = apply_multiplier(u, [&](double xi) { return std::sqrt(eq.l(xi) / eq.b(xi)); });
      const auto sequential = b_inv_sqrt(apply_multiplier(u, [&](double xi) { return std::sqrt(eq.l(xi)); }), eq);
      const double a = std::pow(sobolev_norm(combined, 0.0), 2);
      const double b = std::pow(sobolev_norm(sequential, 0.0), 2);
      CHECK(std::fabs(a - b) <= 1e-13 * std::max(a, 1.0));
      FieldState st{0.0, u, SpectrumField::zeros(grid)};
      CHECK(std::fabs(energy(st, eq, tr).elastic - b) <= 1e-13 * std::max(b, 1.0));
    }
  }
}

TEST_CASE("energy components keep their signs") {
  std::mt19937_64 rng(47);
  const auto grid = make_grid(64, 10.0);
  FourierTransform tr(grid);
  auto eq = make_preset("double-dispersion");
  for (const auto& g : {Nonlinearity::integer_power(1.0, 3), Nonlinearity::odd_power(2.0, 3.0),
                        Nonlinearity::integer_power(-1.0, 2)}) {
    eq.g = g;
    for (int trial = 0; trial < 20; ++trial) {
      FieldState st{0.0, tr.analyze(testing::random_field(grid, rng, 8, true)),
                    tr.analyze(testing::random_field(grid, rng, 8, true))};
      st.v_hat.c[0] = 0.0;
      const auto e = energy(st, eq, tr);
      CHECK(e.kinetic >= 0.0);
      CHECK(e.elastic >= 0.0);
      if (g.potential_nonnegative()) CHECK(e.potential >= 0.0);
    }
  }
  CHECK(Nonlinearity::integer_power(1.0, 3).potential_nonnegative());
  CHECK_FALSE(Nonlinearity::integer_power(1.0, 2).potential_nonnegative());
}

TEST_CASE("norm_series_sample") {
  const auto grid = make_grid(16, M_PI);
  FourierTransform tr(grid);
  const auto eq = make_preset("boussinesq");
  FieldState zero{0.0, SpectrumField::zeros(grid), SpectrumField::zeros(grid)};
  const auto z = norm_series_sample(zero, eq, 1.0, tr);
  CHECK(z.norm_u_s == 0.0);
  CHECK(z.norm_ut_s1 == 0.0);
  CHECK(z.norm_u_gq == 0.0);
  CHECK(z.norm_ut_gq == 0.0);
  CHECK(z.linf == 0.0);

  FieldState cosx{0.5, tr.analyze(sample(grid, [](double x) { return std::cos(x); })), SpectrumField::zeros(grid)};
  const auto c = norm_series_sample(cosx, eq, 1.0, tr);
  CHECK(c.t == 0.5);
  CHECK(c.norm_u_s == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-14));
  CHECK(c.linf == doctest::Approx(1.0).epsilon(1e-14));

  FieldState bad = cosx;
  bad.t = 1.25;
  bad.u_hat.mode(1) = std::numeric_limits<double>::infinity();
  try {
    norm_series_sample(bad, eq, 1.0, tr);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    CHECK(e.time() == 1.25);
  }
}

TEST_CASE("global bound check") {
  const auto grid = make_grid(256, 50.0);
  auto eq = make_preset("boussinesq");
  eq.g = Nonlinearity::odd_power(1.0, 3.0);
  const auto traj = integrate(eq, grid, gaussian_state(grid, 0.5, 2.0), 1e-2, 5.0, 10);
  const double e0 = traj.energies.front().total;
  const auto rep = global_bound_check(traj.norms, eq, 1.0, 1.0, e0);
  CHECK(rep.pass);
  CHECK(rep.violations == 0);
  CHECK(rep.bound_u == doctest::Approx(std::sqrt(e0)));
  for (const auto& n : traj.norms) CHECK(n.norm_u_gq <= std::sqrt(e0) * (1.0 + 1e-6));

  std::vector<NormSample> zeros(5);
  const auto zr = global_bound_check(zeros, eq, 1.0, 1.0, 0.0);
  CHECK(zr.pass);
  CHECK(zr.worst_u_ratio == 0.0);
  CHECK(zr.worst_ut_ratio == 0.0);

  auto inflated = traj.norms;
  inflated[3].norm_u_gq = 2.0 * rep.bound_u;
  const auto bad = global_bound_check(inflated, eq, 1.0, 1.0, e0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.violations == 1);
  CHECK(bad.worst_u_ratio == doctest::Approx(2.0));

  CHECK(error_code_of([&] { global_bound_check(traj.norms, make_preset("boussinesq"), 1.0, 1.0, e0); }) ==
        ErrorCode::precondition);
  CHECK(error_code_of([&] { global_bound_check(traj.norms, eq, 1.0, 1.0, -1.0); }) == ErrorCode::precondition);

  // ten periods of the slowest resolved double-dispersion mode
  auto dd = make_preset("double-dispersion");
  dd.g = Nonlinearity::odd_power(1.0, 3.0);
  const double period = 2.0 * M_PI / (M_PI / 8.0);
  const auto small = make_grid(128, 8.0);
  const auto ddt = integrate(dd, small, gaussian_state(small, 0.5, 1.0), 2e-2, 10.0 * period, 25);
  const auto bounds = verify_bounds(dd, small.frequencies());
  const auto dr = global_bound_check(ddt.norms, dd, bounds.c1_hat, bounds.c3_hat, ddt.energies.front().total);
  CHECK(dr.pass);
  CHECK(dr.worst_ratio() < 1.0);
}

TEST_CASE("energy drift is second order for every preset") {
  const auto grid = make_grid(128, 30.0);
  for (auto name : preset_names()) {
    auto eq = make_preset(name);
    const auto st = gaussian_state(grid, 0.2, 2.0);
    const double d1 = drift(integrate(eq, grid, st, 2e-2, 4.0, 5));
    const double d2 = drift(integrate(eq, grid, st, 1e-2, 4.0, 10));
    CAPTURE(name);
    CHECK(d1 / d2 >= 3.4);
    CHECK(d1 / d2 <= 4.6);
  }
}
