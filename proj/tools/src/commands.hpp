#pragma once

// Command implementations behind the ribau executable. Each command returns
// its JSON report and an exit code: 0 all checks pass, 1 a verification
// failed, 2 the input was invalid.

#include <nlohmann/json.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scene.hpp"

namespace ribau::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2 };

struct Options {
  std::string scene_path;
  std::optional<std::array<int, 2>> grid;
  std::optional<std::vector<double>> thetas;
  std::string out_dir;  // empty: reports are not written; artifacts go to "."
  bool pole_flip = false;
  bool json = false;
};

struct Outcome {
  int exit_code = kPass;
  nlohmann::json report;
};

Outcome cmd_check(const Scene& scene, const Options& opts);
Outcome cmd_transform(const Scene& scene, const Options& opts);
Outcome cmd_demoulin(const Scene& scene, const Options& opts);
Outcome cmd_oracle(const Scene& scene, const Options& opts);
Outcome cmd_export(const Scene& scene, const Options& opts);

/// Loads the scene, applies command-line overrides, runs the command, maps
/// engine errors to exit codes and prints either PASS/FAIL lines or the
/// JSON report to out.
int run_command(const std::string& name, const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace ribau::cli
