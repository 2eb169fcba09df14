// v2x_sim: sweep runner, analytic table and scenario checker.
//
// Exit codes: 0 ok, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "v2x/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

void print_violations(const std::vector<std::string>& violations) {
  for (const auto& v : violations) {
    std::cerr << "error: " << v << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-V2X mode 4 SPS / SPS++ simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int jobs = 1;
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "run the scenario sweep and write CSV outputs");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
  run_cmd->add_option("--seed", seed, "override base_seed");
  run_cmd->add_option("--trials", trials, "override the trial count")->check(CLI::PositiveNumber);
  run_cmd->add_option("--jobs", jobs, "parallel trials")->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_flag("--quiet", quiet, "suppress per-run progress lines");

  std::vector<int> clusters{20, 50, 100};
  auto* table_cmd = app.add_subcommand("table1", "print the analytic occupancy/success grid");
  table_cmd->add_option("--clusters", clusters, "cluster sizes")->delimiter(',')
      ->capture_default_str();

  std::string validate_path;
  bool dump = false;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario without running it");
  validate_cmd->add_option("scenario", validate_path, "scenario JSON file")->required();
  validate_cmd->add_flag("--dump", dump, "print the scenario with defaults filled in");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  using namespace v2x::harness;
  try {
    if (*table_cmd) {
      print_table1(std::cout, clusters);
      return kOk;
    }
    if (*validate_cmd) {
      const Scenario scenario = load_scenario(validate_path);
      const auto violations = validate(scenario);
      if (!violations.empty()) {
        print_violations(violations);
        return kConfigError;
      }
      if (dump) {
        std::cout << to_json(scenario);
      } else {
        std::cout << "ok: " << scenario.schedulers.size() * scenario.densities.size() *
                                   static_cast<std::size_t>(scenario.base.trials)
                  << " runs\n";
      }
      return kOk;
    }

    Scenario scenario = load_scenario(scenario_path);
    if (seed) {
      scenario.base.base_seed = *seed;
    }
    if (trials) {
      scenario.base.trials = *trials;
    }
    std::ostream null_stream(nullptr);
    const auto rows = run_sweep(scenario, SweepOptions{out_dir, jobs}, quiet ? null_stream : std::cerr);
    write_summary_csv(std::cout, rows);
    return kOk;
  } catch (const ConfigError& e) {
    print_violations(e.violations());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
