#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "cc/experiments.hpp"

namespace {

int default_workers() {
  if (const char* env = std::getenv("CCAREA_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
    }
    std::cerr << "warning: ignoring invalid CCAREA_WORKERS\n";
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccarea: estimators and checks for graded group models"};
  app.require_subcommand(1);

  std::string validate_file;
  CLI::App* validate = app.add_subcommand("validate", "Parse a scenario file and report validity");
  validate->add_option("file", validate_file, "Scenario JSON file")->required();

  std::string run_file, out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 0;
  bool svg = false;
  CLI::App* run = app.add_subcommand("run", "Run a scenario and write CSV output");
  run->add_option("file", run_file, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory (default: current)");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--workers", workers, "Worker threads (default: CCAREA_WORKERS or hardware)");
  run->add_flag("--svg", svg, "Also write a log-log SVG plot where applicable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) {
      const cc::Scenario s = cc::load_scenario(validate_file);
      std::cout << "ok: scenario '" << s.id << "' is valid\n";
      return 0;
    }

    const cc::Scenario s = cc::load_scenario(run_file);
    cc::RunOptions opts;
    opts.out_dir = out_dir;
    opts.seed_override = seed;
    opts.workers = workers > 0 ? workers : default_workers();
    opts.svg = svg;
    const cc::Report rep = cc::run_scenario(s, opts);
    for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
    std::cout << (rep.pass ? "PASS" : "FAIL") << ": " << rep.scenario_id << "\n";
    return rep.pass ? 0 : 2;
  } catch (const cc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cc::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const cc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
