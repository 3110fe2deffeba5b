#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dispersive/config.hpp"
#include "dispersive/error.hpp"

namespace dispersive {

namespace {

struct CustomData {
  std::vector<double> x, phi, psi;
};

CustomData read_custom_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ingestion_error, "cannot read initial data '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ingestion_error, "initial data file is empty");
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r'; }), line.end());
  if (line != "x,phi,psi") throw Error(ErrorCode::ingestion_error, "initial data header must be x,phi,psi");
  CustomData data;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    double values[3];
    for (double& v : values) {
      if (!std::getline(ss, cell, ','))
        throw Error(ErrorCode::ingestion_error, "row " + std::to_string(number) + " needs three columns");
      try {
        v = std::stod(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ingestion_error, "row " + std::to_string(number) + ": bad number '" + cell + "'");
      }
    }
    if (!data.x.empty() && !(values[0] > data.x.back()))
      throw Error(ErrorCode::ingestion_error, "initial data x must be strictly increasing");
    data.x.push_back(values[0]);
    data.phi.push_back(values[1]);
    data.psi.push_back(values[2]);
  }
  if (data.x.empty()) throw Error(ErrorCode::ingestion_error, "initial data file has no rows");
  return data;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  if (xs[i] == x) return ys[i];
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - w) * ys[i - 1] + w * ys[i];
}

}  // namespace

InitialProfiles initial_profiles(const RunPlan& plan, const GridSpec& grid) {
  const auto& init = plan.initial;
  InitialProfiles out{std::vector<double>(grid.n, 0.0), std::vector<double>(grid.n, 0.0), false};
  auto& phi = out.phi;
  auto& psi = out.psi;

  if (init.preset == "gaussian-derivative") {
    // amplitude * d/dx exp(-x^2/w^2)
    const double w2 = init.width * init.width;
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      phi[i] = init.amplitude * (-2.0 * x / w2) * std::exp(-x * x / w2);
    }
    out.odd = true;
  } else if (init.preset == "modulated-sine") {
    const double w2 = init.width * init.width;
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      phi[i] = init.amplitude * std::sin(2.0 * std::numbers::pi * x / grid.half_length) * std::exp(-x * x / w2);
    }
  } else if (init.preset == "custom-csv") {
    const CustomData data = read_custom_csv(init.csv);
    if (data.x.front() > grid.x(0) || data.x.back() < grid.x(grid.n - 1))
      throw Error(ErrorCode::ingestion_error, "initial data do not cover the grid [-X, X - dx]");
    for (int i = 0; i < grid.n; ++i) {
      phi[i] = interpolate(data.x, data.phi, grid.x(i));
      psi[i] = interpolate(data.x, data.psi, grid.x(i));
    }
  } else {
    throw ConfigError("unknown initial preset '" + init.preset + "'");
  }

  if (init.preset != "custom-csv")
    for (int i = 0; i < grid.n; ++i) psi[i] = init.psi_scale * phi[i];

  return out;
}

FieldState build_initial_state(const RunPlan& plan, const GridSpec& grid, FourierTransform& transform) {
  const InitialProfiles profiles = initial_profiles(plan, grid);
  FieldState state{0.0, transform.analyze(profiles.phi), transform.analyze(profiles.psi)};
  // An odd profile has zero mean; drop the rounding residue of the sum.
  if (profiles.odd || plan.initial.mean_zero_project) {
    state.u_hat = project_mean_zero(state.u_hat).field;
    state.v_hat = project_mean_zero(state.v_hat).field;
  }
  return state;
}

}  // namespace dispersive
