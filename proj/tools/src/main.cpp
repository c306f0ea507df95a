#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "commands.hpp"
#include "scene.hpp"

int main(int argc, char** argv) {
  using namespace ribau::cli;
  CLI::App app{"ribau: Ribaucour transforms of Legendre surfaces in Lie sphere geometry"};
  app.require_subcommand(1);

  Options opts;
  std::string grid, thetas;
  app.add_option("--scene", opts.scene_path, "scene file (JSON)");
  app.add_option("--grid", grid, "grid size override, e.g. 64x64");
  app.add_option("--theta", thetas, "comma-separated angles, e.g. 0,pi/8,pi/4");
  app.add_option("--out", opts.out_dir, "directory for reports and artifacts");
  app.add_flag("--pole-flip", opts.pole_flip, "project from (0,0,0,-1) instead of (0,0,0,1)");
  app.add_flag("--json", opts.json, "print the JSON report instead of PASS/FAIL lines");

  const std::pair<const char*, const char*> commands[] = {
      {"check", "certify the frame, sweep regularity and test closedness of alpha"},
      {"transform", "run the transform and write f, fhat meshes and a CSV field dump"},
      {"demoulin", "build the Demoulin family of two Ribaucour functions"},
      {"oracle", "jet derivatives against finite differences on random cases"},
      {"export", "write OBJ meshes only"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
    if (!grid.empty()) opts.grid = parse_grid_size(grid);
    if (!thetas.empty()) opts.thetas = parse_angle_list(thetas);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const SceneError& e) {
    std::cerr << "SceneError: " << e.what() << "\n";
    return kInputError;
  }
  return run_command(app.get_subcommands().front()->get_name(), opts, std::cout, std::cerr);
}
