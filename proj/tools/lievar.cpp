// Command-line scenario runner and regularity classifier.

#include <lievar/scenario.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

int do_run(const std::string& config_path, const std::string& out_dir,
           std::optional<double> step, std::optional<std::uint64_t> seed) {
  lievar::ScenarioConfig cfg;
  lievar::RunOutput result;
  try {
    cfg = lievar::parse_config_file(config_path);
    result = lievar::run_scenario(cfg, step, seed);
  } catch (const lievar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const lievar::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  }
  // All computation succeeded; only now touch the filesystem.
  try {
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/trajectory.csv", std::ios::binary);
    csv << result.csv;
    std::ofstream summary(out_dir + "/summary.json", std::ios::binary);
    summary << result.summary.dump(2) << "\n";
    if (!csv || !summary) throw std::runtime_error("write failed");
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "wrote " << out_dir << "/trajectory.csv (" << result.summary["rows"]
            << " rows) and " << out_dir << "/summary.json\n";
  return 0;
}

int do_classify(const std::string& config_path) {
  try {
    const auto cfg = lievar::parse_config_file(config_path);
    const auto rep = lievar::classify_scenario(cfg);
    std::cout << (rep.nondegenerate ? "nondegenerate" : "degenerate") << ", rank " << rep.rank
              << " of " << rep.expected_rank << " (" << rep.probe_description << ")\n";
    return 0;
  } catch (const lievar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational mechanics on Lie groups: scenario runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<double> step;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run a scenario config and write trajectory/summary");
  run->add_option("config", config_path, "path to the scenario config")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--step", step, "override the time step");
  run->add_option("--seed", seed, "override the random seed");

  auto* classify = app.add_subcommand("classify", "report the regularity of the scenario's Lagrangian");
  classify->add_option("config", config_path, "path to the scenario config")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return do_run(config_path, out_dir, step, seed);
  return do_classify(config_path);
}
