#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dispersive/config.hpp"
#include "dispersive/error.hpp"
#include "dispersive/runner.hpp"
#include "dispersive/symbols.hpp"

using namespace dispersive;

namespace {

void report(const RunSummary& s) {
  std::cout << "exit " << s.exit_status << "  t=" << s.final_t << "  drift=" << s.energy_drift;
  if (s.event) std::cout << "  t_escape=" << s.event->t_escape << " (" << to_string(s.event->trigger) << ")";
  if (s.certificate && s.certificate->valid) std::cout << "  t1_bound=" << s.certificate->t1_bound;
  if (s.bound_check) std::cout << "  bound_ratio=" << s.bound_check->worst_ratio();
  std::cout << "\n";
  if (!s.message.empty()) std::cerr << s.message << "\n";
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solver for u_tt - L u_xx = B(g(u))_xx"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a simulation");
  run_cmd->add_option("config", config_path, "config file")->required();

  std::string param, values;
  int workers = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one simulation per parameter value");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  sweep_cmd->add_option("--param", param, "initial.amplitude, time.dt or grid.N")->required();
  sweep_cmd->add_option("--values", values, "comma separated values")->required();
  sweep_cmd->add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);

  auto* check_cmd = app.add_subcommand("check", "theorem gates and blow-up certificate only");
  check_cmd->add_option("config", config_path, "config file")->required();

  auto* preset_cmd = app.add_subcommand("preset", "equation presets");
  preset_cmd->require_subcommand(1);
  auto* list_cmd = preset_cmd->add_subcommand("list", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (list_cmd->parsed()) {
    for (auto name : preset_names()) std::cout << name << "\n";
    return 0;
  }

  RunPlan plan;
  try {
    plan = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kExitConfig;
  }

  if (run_cmd->parsed()) {
    const auto summary = run(plan);
    report(summary);
    return summary.exit_status;
  }
  if (check_cmd->parsed()) {
    const auto summary = check(plan);
    std::cout << summary_json(summary, false);
    return summary.exit_status;
  }

  try {
    const auto result = sweep(plan, param, split_values(values), workers);
    std::cout << sweep_csv(result);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
