#include <cmath>
#include <random>

#include <doctest.h>

#include "dispersive/propagator.hpp"
#include "dispersive/symbols.hpp"
#include "support.hpp"

using namespace dispersive;
using testing::error_code_of;

namespace {

EquationSpec linear(std::string_view preset) {
  auto eq = make_preset(preset);
  eq.g = Nonlinearity::integer_power(0.0, 2);
  return eq;
}

FieldState random_state(const GridSpec& grid, std::mt19937_64& rng, double amplitude = 1.0) {
  FourierTransform tr(grid);
  FieldState st{0.0, tr.analyze(testing::random_field(grid, rng, 8, true)),
                tr.analyze(testing::random_field(grid, rng, 8, true))};
  for (auto& c : st.u_hat.c) c *= amplitude;
  for (auto& c : st.v_hat.c) c *= amplitude;
  return st;
}

FieldState gaussian_state(const GridSpec& grid, double amplitude) {
  FourierTransform tr(grid);
  std::vector<double> phi(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    phi[i] = amplitude * (-2.0 * x) * std::exp(-x * x);
  }
  return {0.0, tr.analyze(phi), SpectrumField::zeros(grid)};
}

double state_diff(const FieldState& a, const FieldState& b) {
  return std::max(testing::max_abs_diff(a.u_hat, b.u_hat), testing::max_abs_diff(a.v_hat, b.v_hat));
}

double state_size(const FieldState& a) { return std::max(testing::max_abs(a.u_hat), testing::max_abs(a.v_hat)); }

// Time-only forcing on one mode: f = -xi^2 b h(t) with h(t) = cos(1.3 t) + 0.4 sin(2.1 t).
double h_of(double t) { return std::cos(1.3 * t) + 0.4 * std::sin(2.1 * t); }

}  // namespace

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  for (double x : {1e-8, 5e-5, 9.9e-5, 1e-4, 1e-3, 0.5, 3.0})
    CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
  CHECK(sinc(-0.3) == sinc(0.3));
}

TEST_CASE("table entries") {
  const auto grid = make_grid(16, M_PI);
  const double dt = M_PI / std::sqrt(2.0);
  const auto tab = build_tables(linear("boussinesq"), grid, dt);
  const int k0 = grid.slot(0);
  CHECK(tab.cos_full[k0] == 1.0);
  CHECK(tab.sinc_full[k0] == dt);
  CHECK(tab.dsin_full[k0] == 0.0);
  CHECK(tab.sinc_half[k0] == dt / 2.0);

  const int k1 = grid.slot(1);
  CHECK(tab.cos_full[k1] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::fabs(tab.sinc_full[k1]) <= 1e-15);
  CHECK(std::fabs(tab.dsin_full[k1]) <= 1e-15);

  const auto dd = build_tables(linear("double-dispersion"), grid, 0.25);
  const int k2 = grid.slot(2);
  CHECK(dd.cos_full[k2] == doctest::Approx(std::cos(0.5)).epsilon(1e-15));
  CHECK(dd.sinc_full[k2] == doctest::Approx(std::sin(0.5) / 2.0).epsilon(1e-15));
  CHECK(dd.dsin_full[k2] == doctest::Approx(-2.0 * std::sin(0.5)).epsilon(1e-15));

  CHECK(error_code_of([&] { build_tables(linear("boussinesq"), grid, 0.0); }) == ErrorCode::precondition);
  auto neg = linear("boussinesq");
  neg.l = SymbolExpr::rational({1.0, -1.0}, {1.0});
  CHECK(error_code_of([&] { build_tables(neg, grid, 0.1); }) == ErrorCode::invalid_symbol);
}

TEST_CASE("rotation identity") {
  const auto grid = make_grid(256, 50.0);
  for (auto name : preset_names())
    for (double dt : {1e-3, 0.1, 1.7}) {
      const auto tab = build_tables(linear(name), grid, dt);
      for (int k = 0; k < grid.n; ++k) {
        CHECK(std::fabs(tab.cos_full[k] * tab.cos_full[k] - tab.sinc_full[k] * tab.dsin_full[k] - 1.0) <= 1e-14);
        CHECK(std::fabs(tab.cos_half[k] * tab.cos_half[k] - tab.sinc_half[k] * tab.dsin_half[k] - 1.0) <= 1e-14);
      }
    }
}

TEST_CASE("apply_homogeneous") {
  const auto grid = make_grid(16, M_PI);
  const auto tab = build_tables(linear("boussinesq"), grid, M_PI / std::sqrt(2.0));
  FieldState st{0.0, SpectrumField::zeros(grid), SpectrumField::zeros(grid)};
  st.u_hat.mode(1) = 0.5;
  st.u_hat.mode(-1) = 0.5;
  auto out = apply_homogeneous(st, tab);
  CHECK(std::abs(out.u_hat.mode(1) + 0.5) <= 1e-15);
  CHECK(std::abs(out.v_hat.mode(1)) <= 1e-15);
  CHECK(out.t == doctest::Approx(M_PI / std::sqrt(2.0)));

  FieldState mean{0.0, SpectrumField::zeros(grid), SpectrumField::zeros(grid)};
  mean.v_hat.mode(0) = 1.0;
  const auto small = build_tables(linear("boussinesq"), grid, 0.3);
  out = apply_homogeneous(mean, small);
  CHECK(out.u_hat.mode(0) == Complex(0.3));
  CHECK(out.v_hat.mode(0) == Complex(1.0));
}

TEST_CASE("homogeneous flow is reversible and conserves mode energy") {
  std::mt19937_64 rng(17);
  const auto grid = make_grid(128, 20.0);
  for (auto name : preset_names()) {
    const auto tab = build_tables(linear(name), grid, 0.037);
    const auto back = tab.reversed();
    for (int trial = 0; trial < 5; ++trial) {
      const auto st = random_state(grid, rng);
      const auto fwd = apply_homogeneous(st, tab);
      const auto round = apply_homogeneous(fwd, back);
      CHECK(state_diff(round, st) <= 1e-12 * state_size(st));
      CHECK(std::fabs(round.t - st.t) <= 1e-15);
      for (int k = 0; k < grid.n; ++k) {
        const double w2 = tab.omega[k] * tab.omega[k];
        const double e0 = w2 * std::norm(st.u_hat.c[k]) + std::norm(st.v_hat.c[k]);
        const double e1 = w2 * std::norm(fwd.u_hat.c[k]) + std::norm(fwd.v_hat.c[k]);
        CHECK(std::fabs(e1 - e0) <= 1e-12 * std::max(e0, 1e-300));
      }
    }
  }
}

TEST_CASE("linear exactness independent of step count") {
  std::mt19937_64 rng(29);
  const auto grid = make_grid(64, 10.0);
  const auto eq = linear("double-dispersion");
  const auto st = random_state(grid, rng);
  const double T = 0.8;
  const auto one = apply_homogeneous(st, build_tables(eq, grid, T));
  for (int n : {10, 100, 800}) {
    Stepper stepper(eq, grid, T / n, Scheme::exp_midpoint, {}, true);
    FieldState cur = st;
    for (int i = 0; i < n; ++i) cur = stepper.step(cur).state;
    CHECK(state_diff(cur, one) <= 1e-12 * state_size(st));
  }
}

TEST_CASE("exponential midpoint") {
  std::mt19937_64 rng(31);
  const auto grid = make_grid(64, 10.0);
  const auto eq = linear("boussinesq");
  const auto tab = build_tables(eq, grid, 0.01);
  NonlinearForcing nl(eq, grid, true);
  const auto forcing = make_forcing(nl);

  const auto st = random_state(grid, rng);
  const auto res = step_exp_midpoint(st, forcing, tab);
  CHECK(state_diff(res.state, apply_homogeneous(st, tab)) == 0.0);
  CHECK(res.report.scheme == Scheme::exp_midpoint);
  CHECK(res.report.dt == 0.01);

  auto quad = make_preset("boussinesq");
  NonlinearForcing nq(quad, grid, true);
  FieldState zero{0.0, SpectrumField::zeros(grid), SpectrumField::zeros(grid)};
  const auto z = step_exp_midpoint(zero, make_forcing(nq), build_tables(quad, grid, 0.01));
  CHECK(testing::max_abs(z.state.u_hat) == 0.0);
  CHECK(testing::max_abs(z.state.v_hat) == 0.0);
}

TEST_CASE("picard iteration") {
  std::mt19937_64 rng(37);
  const auto grid = make_grid(64, 10.0);
  const auto eq0 = linear("boussinesq");
  const auto tab0 = build_tables(eq0, grid, 0.01);
  NonlinearForcing n0(eq0, grid, true);
  const auto st = random_state(grid, rng);
  auto res = step_picard(st, make_forcing(n0), tab0, {});
  CHECK(res.report.picard_iterations == 1);
  CHECK(state_diff(res.state, apply_homogeneous(st, tab0)) == 0.0);

  const auto eq = make_preset("boussinesq");
  const auto smooth = gaussian_state(grid, 0.1);
  for (double dt : {1e-3, 2e-3, 4e-3}) {
    const auto tab = build_tables(eq, grid, dt);
    NonlinearForcing nl(eq, grid, true);
    const auto f = make_forcing(nl);
    const auto p = step_picard(smooth, f, tab, {});
    CHECK(p.report.picard_iterations <= 5);
    CHECK(p.report.picard_iterations >= 2);
    const auto m = step_exp_midpoint(smooth, f, tab);
    CHECK(state_diff(p.state, m.state) <= dt * dt * dt);
  }

  const auto wide = make_grid(256, 50.0);
  const auto ib = make_preset("improved-boussinesq");
  const auto big = build_tables(ib, wide, 10.0);
  NonlinearForcing nb(ib, wide, true);
  CHECK(error_code_of([&] { step_picard(gaussian_state(wide, 1.0), make_forcing(nb), big, {}); }) ==
        ErrorCode::contraction_failure);
  const auto big_b = build_tables(eq, wide, 10.0);
  NonlinearForcing nbb(eq, wide, true);
  CHECK(error_code_of([&] { step_picard(gaussian_state(wide, 4.0), make_forcing(nbb), big_b, {}); }) ==
        ErrorCode::contraction_failure);
}

TEST_CASE("scheme agreement is third order per step") {
  const auto grid = make_grid(64, 10.0);
  const auto eq = make_preset("boussinesq");
  const auto st = gaussian_state(grid, 0.3);
  std::vector<double> diffs;
  for (double dt : {8e-3, 4e-3, 2e-3}) {
    const auto tab = build_tables(eq, grid, dt);
    NonlinearForcing nl(eq, grid, true);
    const auto f = make_forcing(nl);
    diffs.push_back(state_diff(step_picard(st, f, tab, {}).state, step_exp_midpoint(st, f, tab).state));
  }
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
    const double order = std::log2(diffs[i] / diffs[i + 1]);
    CHECK(order > 2.7);
    CHECK(order < 3.3);
  }
}

TEST_CASE("self convergence of both steppers") {
  const auto grid = make_grid(128, 20.0);
  const auto eq = make_preset("boussinesq");
  const auto st = gaussian_state(grid, 0.5);
  const double T = 1.0;
  for (auto scheme : {Scheme::exp_midpoint, Scheme::picard}) {
    auto solve = [&](double dt) {
      Stepper stepper(eq, grid, dt, scheme, {}, true);
      FieldState cur = st;
      const int n = static_cast<int>(std::lround(T / dt));
      for (int i = 0; i < n; ++i) cur = stepper.step(cur).state;
      return cur;
    };
    const auto ref = solve(T / 1600);
    std::vector<double> errs;
    for (int n : {25, 50, 100, 200}) errs.push_back(state_diff(solve(T / n), ref));
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      const double ratio = errs[i] / errs[i + 1];
      CHECK(ratio >= 3.4);
      CHECK(ratio <= 4.6);
    }
  }
}

TEST_CASE("reference mode solution") {
  ForcingSamples zero{0.0, 1e-3, std::vector<Complex>(3001, 0.0)};
  auto [u, v] = reference_mode_solution(2.0, 1.0, 1.0, zero, 3.0, 1.0, 0.0);
  CHECK(std::abs(u - std::cos(6.0)) <= 1e-12);
  CHECK(std::abs(v + 2.0 * std::sin(6.0)) <= 1e-11);

  ForcingSamples c{0.0, 1e-3, std::vector<Complex>(2001, 0.7)};
  std::tie(u, v) = reference_mode_solution(0.0, 2.0, 0.5, c, 2.0, 0.3, -0.1);
  CHECK(std::abs(u - (0.3 - 0.1 * 2.0 - 2.0 * 0.7 * 4.0 / 2.0)) <= 1e-12);

  // u'' + u = cos t with u(0)=1, u'(0)=0: u = cos t + t sin t / 2; sign flipped by -xi^2 b = -1
  ForcingSamples res{0.0, 1e-3, {}};
  for (int i = 0; i <= 10000; ++i) res.values.push_back(std::cos(1e-3 * i));
  std::tie(u, v) = reference_mode_solution(1.0, 1.0, 1.0, res, 10.0, 1.0, 0.0);
  CHECK(std::abs(u - (std::cos(10.0) - 10.0 * std::sin(10.0) / 2.0)) <= 1e-10);

  CHECK(error_code_of([&] { reference_mode_solution(1.0, 1.0, 1.0, res, 0.5, 1.0, 0.0); }) ==
        ErrorCode::precondition);
}

TEST_CASE("forced single mode converges at second order") {
  const auto grid = make_grid(16, M_PI);
  const auto eq = linear("boussinesq");
  const int j = 2;
  const double xi = grid.xi(grid.slot(j));
  const double omega = eval_symbols(eq, xi).omega;
  const double b = eq.b(xi);
  const double T = 2.0;

  ForcingSamples h{0.0, T / 4000.0, {}};
  for (int i = 0; i <= 4000; ++i) h.values.push_back(h_of(h.spacing * i));
  const auto [u_ref, v_ref] = reference_mode_solution(omega, xi, b, h, T, 0.4, -0.2);

  Forcing forcing = [&](double t, const SpectrumField&, SpectrumField& out) {
    std::fill(out.c.begin(), out.c.end(), Complex(0.0));
    out.mode(j) = -xi * xi * b * h_of(t);
  };
  for (auto scheme : {Scheme::exp_midpoint, Scheme::picard}) {
    std::vector<double> errs;
    for (double dt : {4e-2, 2e-2, 1e-2}) {
      const auto tab = build_tables(eq, grid, dt);
      FieldState st{0.0, SpectrumField::zeros(grid), SpectrumField::zeros(grid)};
      st.u_hat.mode(j) = 0.4;
      st.v_hat.mode(j) = -0.2;
      const int n = static_cast<int>(std::lround(T / dt));
      for (int i = 0; i < n; ++i)
        st = scheme == Scheme::picard ? step_picard(st, forcing, tab, {}).state
                                      : step_exp_midpoint(st, forcing, tab).state;
      errs.push_back(std::abs(st.u_hat.mode(j) - u_ref) + std::abs(st.v_hat.mode(j) - v_ref));
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      const double order = std::log2(errs[i] / errs[i + 1]);
      CHECK(order >= 1.8);
      CHECK(order <= 2.2);
    }
  }
}

TEST_CASE("scheme names") {
  CHECK(to_string(Scheme::exp_midpoint) == "exp-midpoint");
  CHECK(scheme_from_string("picard") == Scheme::picard);
  CHECK(error_code_of([] { scheme_from_string("rk4"); }) == ErrorCode::config_error);
}
