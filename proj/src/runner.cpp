#include "dispersive/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "dispersive/error.hpp"
#include "dispersive/propagator.hpp"
#include "dispersive/spectral.hpp"

namespace dispersive {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kGateTheorems[] = {"local-6.1", "global-6.3", "blowup-6.5"};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::config_error, "cannot write " + path.string());
  out << text;
}

std::vector<double> sobolev_weights(const GridSpec& grid, double s) {
  std::vector<double> w(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double xi = grid.xi(k);
    w[k] = std::pow(1.0 + xi * xi, s);
  }
  return w;
}

double weighted_norm(const SpectrumField& c, const std::vector<double>& w) {
  double sum = 0.0;
  for (std::size_t k = 0; k < c.c.size(); ++k) sum += w[k] * std::norm(c.c[k]);
  return std::sqrt(2.0 * c.grid.half_length * sum);
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%g.csv", t);
  return buf;
}

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json gate_json(const GateReport& g) {
  Json conditions = Json::array();
  for (const auto& c : g.conditions)
    conditions.push_back({{"name", c.name}, {"value", json_number(c.value)},
                          {"threshold", json_number(c.threshold)}, {"pass", c.pass}});
  return {{"theorem", g.theorem}, {"pass", g.pass}, {"conditions", conditions}, {"notes", g.notes}};
}

int exit_for(const Error& e) {
  return e.code() == ErrorCode::positivity_violation ? kExitGate : kExitConfig;
}

struct Context {
  EquationSpec eq;
  GridSpec grid;
  bool dealias = true;
};

RunSummary execute(const RunPlan& plan, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  RunSummary summary;
  auto finish = [&]() -> RunSummary& {
    summary.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return summary;
  };

  Context ctx;
  FieldState state;
  try {
    validate(plan);
    ctx.eq = build_equation(plan);
    ctx.grid = build_grid(plan);
    ctx.dealias = dealias_enabled(plan);
  } catch (const Error& e) {
    summary.exit_status = kExitConfig;
    summary.message = e.what();
    return finish();
  }
  const auto& eq = ctx.eq;
  const auto& grid = ctx.grid;
  const double s = plan.diagnostics.s;

  std::filesystem::path dir(plan.output.dir);
  try {
    if (options.write_outputs) std::filesystem::create_directories(dir);
  } catch (const std::filesystem::filesystem_error& e) {
    summary.exit_status = kExitConfig;
    summary.message = e.what();
    return finish();
  }

  FourierTransform transform(grid);
  try {
    for (const char* theorem : kGateTheorems)
      summary.gates.push_back(theorem_gate(eq, s, theorem, plan.diagnostics.nu));
    const auto freqs = grid.frequencies();
    summary.symbol_bounds = verify_bounds(eq, freqs);
    if (eq.warning) summary.message = *eq.warning;
    if (plan.equation.strict_gates && !summary.gates.front().pass) {
      summary.exit_status = kExitGate;
      if (summary.message.empty()) summary.message = "theorem gate failed: " + summary.gates.front().theorem;
      if (options.write_outputs) write_file(dir / "summary.json", summary_json(finish()));
      return finish();
    }
    state = build_initial_state(plan, grid, transform);
    summary.e0 = initial_energy(state, eq, transform);
    const auto nu = plan.diagnostics.nu ? plan.diagnostics.nu : default_nu(eq.g);
    summary.certificate = make_certificate(state, eq, nu.value_or(0.0), transform);
  } catch (const Error& e) {
    summary.exit_status = exit_for(e);
    summary.message = e.what();
    return finish();
  }

  if (options.write_outputs) write_file(dir / "certificate.json", certificate_json(*summary.certificate));
  if (!options.time_loop) return finish();

  const auto& cert = *summary.certificate;
  const double dt0 = plan.time.dt;
  const PicardOptions picard{plan.time.picard_tol, plan.time.picard_kmax, s, eq.rho};
  Stepper stepper(eq, grid, dt0, scheme_from_string(plan.time.scheme), picard, ctx.dealias);

  const auto w_u = sobolev_weights(grid, s);
  const auto w_v = sobolev_weights(grid, s - 1.0 - eq.rho / 2.0);
  auto continuation = [&](const FieldState& st) { return weighted_norm(st.u_hat, w_u) + weighted_norm(st.v_hat, w_v); };
  const double c_init = continuation(state);
  const double threshold = plan.diagnostics.blowup_factor * (c_init > 0.0 ? c_init : 1.0);

  std::vector<HTracePoint> trace;
  auto sample = [&](const FieldState& st) {
    DiagnosticsRow row;
    row.norms = norm_series_sample(st, eq, s, transform);
    row.energy = energy(st, eq, transform);
    if (cert.valid) {
      trace.push_back(h_trace(st, eq, cert));
      row.h = trace.back().h;
      row.hp = trace.back().hp;
    }
    summary.rows.push_back(row);
  };

  auto snapshots = plan.output.snapshots;
  std::sort(snapshots.begin(), snapshots.end());
  std::size_t next_snapshot = 0;
  auto take_snapshots = [&](const FieldState& st, double dt) {
    while (next_snapshot < snapshots.size() && st.t >= snapshots[next_snapshot] - 0.5 * dt) {
      if (options.write_outputs)
        write_file(dir / snapshot_name(snapshots[next_snapshot]), snapshot_csv(st, transform));
      ++next_snapshot;
    }
  };

  const double interval = plan.diagnostics.stride * dt0;
  long next_sample = 1;
  auto record_event = [&](double t, BlowupTrigger trigger) {
    BlowupEvent event;
    event.t_escape = t;
    event.trigger = trigger;
    if (!summary.rows.empty()) event.last_finite = summary.rows.back().norms;
    summary.event = event;
  };

  try {
    sample(state);
    take_snapshots(state, dt0);
    while (state.t < plan.time.t_end - 0.5 * stepper.dt()) {
      std::optional<BlowupTrigger> failure;
      double failure_t = state.t;
      StepResult res;
      try {
        res = stepper.step(state);
        if (!std::isfinite(continuation(res.state))) {
          failure = BlowupTrigger::overflow;
          failure_t = res.state.t;
        }
      } catch (const OverflowError& e) {
        failure = BlowupTrigger::overflow;
        failure_t = e.time();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::contraction_failure) throw;
        failure = BlowupTrigger::picard_failure;
      }
      if (failure) {
        if (summary.halvings < plan.time.max_halvings) {
          stepper.set_dt(stepper.dt() / 2.0);
          ++summary.halvings;
          continue;
        }
        record_event(failure_t, *failure);
        break;
      }
      state = std::move(res.state);
      ++summary.steps;
      if (continuation(state) > threshold) {
        record_event(state.t, BlowupTrigger::norm_threshold);
        break;
      }
      if (state.t >= next_sample * interval - 0.5 * stepper.dt()) {
        sample(state);
        ++next_sample;
      }
      take_snapshots(state, stepper.dt());
    }
    if (!summary.event && summary.rows.back().norms.t < state.t) sample(state);
  } catch (const OverflowError& e) {
    record_event(e.time(), BlowupTrigger::overflow);
  } catch (const Error& e) {
    summary.exit_status = exit_for(e);
    summary.message = e.what();
  }

  summary.final_t = summary.event ? summary.event->t_escape : state.t;
  summary.dt_final = stepper.dt();
  if (summary.event) summary.exit_status = kExitBlowup;

  if (!trace.empty()) {
    fill_convexity_residuals(trace, cert.nu);
    for (std::size_t i = 0; i < trace.size(); ++i) summary.rows[i].convexity_residual = trace[i].convexity_residual;
  }

  const double scale = std::fabs(summary.e0) > 0.0 ? std::fabs(summary.e0) : 1.0;
  for (const auto& row : summary.rows)
    summary.energy_drift = std::max(summary.energy_drift, std::fabs(row.energy.total - summary.e0) / scale);

  const auto& global_gate = summary.gates[1];
  if (global_gate.pass && summary.e0 >= 0.0 && summary.symbol_bounds && summary.symbol_bounds->c1_hat > 0.0) {
    std::vector<NormSample> series;
    series.reserve(summary.rows.size());
    for (const auto& row : summary.rows) series.push_back(row.norms);
    summary.bound_check = global_bound_check(series, eq, summary.symbol_bounds->c1_hat,
                                             summary.symbol_bounds->c3_hat, summary.e0, plan.diagnostics.bound_tol);
  }

  if (options.write_outputs) {
    write_file(dir / "diagnostics.csv", diagnostics_csv(summary.rows));
    if (plan.output.svg && summary.rows.size() >= 2) {
      try {
        write_file(dir / "chart.svg", emit_svg(summary.rows, plan.output.svg_columns));
      } catch (const Error& e) {
        summary.exit_status = kExitConfig;
        summary.message = e.what();
      }
    }
    write_file(dir / "summary.json", summary_json(finish()));
  }
  return finish();
}

}  // namespace

RunSummary run(const RunPlan& plan, const RunOptions& options) { return execute(plan, options); }

RunSummary check(const RunPlan& plan) { return execute(plan, {.write_outputs = false, .time_loop = false}); }

std::string summary_json(const RunSummary& summary, bool with_wall_time) {
  Json j;
  j["exit"] = summary.exit_status;
  j["message"] = summary.message;
  j["final_t"] = json_number(summary.final_t);
  j["steps"] = summary.steps;
  j["dt_final"] = json_number(summary.dt_final);
  j["halvings"] = summary.halvings;
  j["E0"] = json_number(summary.e0);
  j["energy_drift"] = json_number(summary.energy_drift);
  if (summary.bound_check) {
    const auto& b = *summary.bound_check;
    j["bound_check"] = {{"pass", b.pass},
                        {"bound_u", json_number(b.bound_u)},
                        {"bound_ut", json_number(b.bound_ut)},
                        {"worst_ratio", json_number(b.worst_ratio())},
                        {"violations", b.violations}};
  } else {
    j["bound_check"] = nullptr;
  }
  if (summary.event) {
    const auto& e = *summary.event;
    j["event"] = {{"t_escape", json_number(e.t_escape)},
                  {"trigger", std::string(to_string(e.trigger))},
                  {"last_finite_t", json_number(e.last_finite.t)},
                  {"last_finite_norm", json_number(e.last_finite.continuation())}};
  } else {
    j["event"] = nullptr;
  }
  j["certificate"] = summary.certificate ? Json::parse(certificate_json(*summary.certificate)) : Json(nullptr);
  Json gates = Json::array();
  for (const auto& g : summary.gates) gates.push_back(gate_json(g));
  j["gates"] = gates;
  if (summary.symbol_bounds) {
    const auto& b = *summary.symbol_bounds;
    j["symbol_bounds"] = {{"c1", json_number(b.c1_hat)}, {"c2", json_number(b.c2_hat)},
                          {"c3", json_number(b.c3_hat)}, {"pass", b.pass}, {"failures", b.failures}};
  }
  if (with_wall_time) j["wall_time_s"] = summary.wall_time_s;
  return j.dump(2) + "\n";
}

std::vector<std::string_view> sweep_parameters() { return {"initial.amplitude", "time.dt", "grid.N"}; }

SweepResult sweep(const RunPlan& base, std::string_view param, const std::vector<std::string>& values, int workers,
                  bool write_outputs) {
  const auto allowed = sweep_parameters();
  if (std::find(allowed.begin(), allowed.end(), param) == allowed.end())
    throw ConfigError("unsupported sweep parameter '" + std::string(param) + "'");
  if (values.empty()) throw ConfigError("sweep needs at least one value");

  std::vector<RunPlan> plans;
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunPlan child = base;
    set_plan_value(child, param, values[i]);
    child.output.dir = (std::filesystem::path(base.output.dir) / ("run_" + std::to_string(i))).string();
    plans.push_back(std::move(child));
  }

  SweepResult result;
  result.runs.resize(plans.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++)
      result.runs[i] = run(plans[i], {.write_outputs = write_outputs, .time_loop = true});
  };
  const int n_workers = std::clamp(workers, 1, static_cast<int>(plans.size()));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& run_summary = result.runs[i];
    SweepRow row;
    row.value = values[i];
    row.exit_status = run_summary.exit_status;
    row.drift = run_summary.energy_drift;
    if (run_summary.event) row.t_escape = run_summary.event->t_escape;
    if (run_summary.certificate && run_summary.certificate->valid) row.t1_bound = run_summary.certificate->t1_bound;
    result.rows.push_back(row);
  }
  if (write_outputs) {
    std::filesystem::create_directories(base.output.dir);
    write_file(std::filesystem::path(base.output.dir) / "sweep.csv", sweep_csv(result));
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "value,exit,drift,t_escape,t1_bound\n";
  for (const auto& row : result.rows) {
    out += row.value + "," + std::to_string(row.exit_status) + "," + format_double(row.drift) + ",";
    if (row.t_escape) out += format_double(*row.t_escape);
    out += ",";
    if (row.t1_bound) out += format_double(*row.t1_bound);
    out += "\n";
  }
  return out;
}

}  // namespace dispersive
