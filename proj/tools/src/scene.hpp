#pragma once

// JSON scene files for the ribau command-line tool.

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ribau/charts.hpp"
#include "ribau/expr.hpp"
#include "ribau/sweep.hpp"

namespace ribau::cli {

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputRequest {
  std::string kind;          // obj, csv or json
  std::string surface = "f";  // f or f_hat (obj only)
  std::optional<double> theta;  // family member (demoulin obj only)
  std::string path;
};

struct DualRequest {
  Domain patch = Domain::patch(0.1, 6.183185307179586, 0.1, 6.183185307179586);
  std::array<int, 2> grid{64, 64};
  double initial_offset = 1.0;
};

struct OracleRequest {
  std::uint64_t seed = 20240601;
  int cases = 20;
};

struct Scene {
  ChartSpec chart;
  std::optional<TauExpr> tau;
  std::optional<TauExpr> tau1;
  std::array<int, 2> grid{64, 64};
  std::vector<double> thetas;  // default: k pi / 8, k = 0..7
  Tolerances tol;
  std::vector<OutputRequest> outputs;
  bool pole_flip = false;
  std::optional<DualRequest> dual;
  OracleRequest oracle;
};

/// Angles: plain numbers, or strings such as "pi", "pi/4", "3*pi/8", "0.5".
double parse_angle(const nlohmann::json& j);
std::vector<double> parse_angle_list(const std::string& csv);
std::array<int, 2> parse_grid_size(const std::string& text);  // "NxM"

ChartSpec parse_chart(const nlohmann::json& j);
nlohmann::json chart_to_json(const ChartSpec& chart);

/// Validates keys, chart, grid >= 4x4 and expressions. chart and tau are
/// required unless require_tau is false (the oracle command).
Scene parse_scene(const nlohmann::json& j, bool require_tau = true);
Scene load_scene(const std::string& path, bool require_tau = true);

std::vector<double> default_thetas();

}  // namespace ribau::cli
