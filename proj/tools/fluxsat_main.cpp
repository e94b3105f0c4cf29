#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fluxsat/experiment.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"fluxsat: 1D flux-saturated diffusion laboratory"};
  app.require_subcommand(1);

  std::string run_cfg;
  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", run_cfg, "experiment .cfg file")->required();

  std::string suite_dir;
  CLI::App* suite = app.add_subcommand("suite", "run every .cfg in a directory");
  suite->add_option("dir", suite_dir, "directory of configs")->required();

  std::string bounds_cfg;
  CLI::App* bounds = app.add_subcommand("bounds", "print analytic bounds for a config");
  bounds->add_option("config", bounds_cfg, "experiment .cfg file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto cfg = fluxsat::parse_config(run_cfg);
      auto res = fluxsat::run_experiment(cfg);
      std::cout << (res.all_pass ? "PASS " : "FAIL ") << cfg.name << " -> "
                << res.summary_path << "\n";
      return res.all_pass ? 0 : 1;
    }
    if (suite->parsed()) {
      std::vector<fs::path> cfgs;
      for (const auto& entry : fs::directory_iterator(suite_dir))
        if (entry.path().extension() == ".cfg") cfgs.push_back(entry.path());
      std::sort(cfgs.begin(), cfgs.end());
      if (cfgs.empty()) {
        std::cerr << "no .cfg files in " << suite_dir << "\n";
        return 1;
      }
      bool all = true;
      for (const auto& path : cfgs) {
        auto cfg = fluxsat::parse_config(path.string());
        auto res = fluxsat::run_experiment(cfg);
        std::cout << (res.all_pass ? "PASS " : "FAIL ") << path.filename().string() << "\n";
        all = all && res.all_pass;
      }
      return all ? 0 : 1;
    }
    if (bounds->parsed()) {
      auto cfg = fluxsat::parse_config(bounds_cfg);
      fluxsat::print_bounds(cfg);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
