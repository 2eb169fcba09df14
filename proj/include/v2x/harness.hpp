#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "v2x/engine.hpp"

namespace v2x::harness {

inline constexpr int kSchemaVersion = 1;

/// Raised for unreadable or invalid scenario files; carries every violation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A sweep: every scheduler x density x trial of `base`.
struct Scenario {
  SimConfig base;
  std::vector<int> densities{40, 80, 120, 160};
  std::vector<SchedulerSpec> schedulers{SchedulerSpec::fixed(20), SchedulerSpec::fixed(50),
                                        SchedulerSpec::fixed(100), SchedulerSpec::adaptive()};

  SimConfig config_for(const SchedulerSpec& scheduler, int density) const;
};

/// Parses a JSON scenario; absent keys keep their defaults, unknown keys are
/// violations. Throws ConfigError.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Every invariant violation of the scenario (empty when valid).
std::vector<std::string> validate(const Scenario& scenario);

/// The scenario as JSON with every key spelled out.
std::string to_json(const Scenario& scenario);

struct SweepOptions {
  std::filesystem::path out_dir;
  int jobs = 1;
};

struct SummaryRow {
  std::string scheduler;
  int density = 0;
  int trials = 0;
  double tracking_error_mean = 0.0;
  double tracking_error_std = 0.0;
  double risk_ratio_mean = 0.0;
  double risk_ratio_std = 0.0;
  double pdr_mean = 0.0;
  double pdr_std = 0.0;
  double mean_rri_mean = 0.0;
  double mean_rri_std = 0.0;
  double untracked_fraction_mean = 0.0;
};

/// Runs the sweep and writes runs/<scheduler>_<density>_<trial>.csv,
/// summary.csv, rri_timeseries.csv and rri_hist.csv under out_dir. On failure
/// the files written so far are removed and the exception propagates.
std::vector<SummaryRow> run_sweep(const Scenario& scenario, const SweepOptions& options,
                                  std::ostream& log);

std::string run_file_name(const std::string& scheduler, int density, int trial);

void write_run_csv(std::ostream& os, const RunRecord& record);
/// Reads the per-tick samples back and recomputes the aggregates.
RunRecord read_run_csv(std::istream& is, double duration_s);

/// Mean and sample standard deviation of per-trial aggregates.
SummaryRow summarize(const std::string& scheduler, int density,
                     const std::vector<RunRecord>& trials);

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Prints the occupancy / success grid for the given clusters at fixed RRIs of
/// 20, 50 and 100 ms plus the adaptive column.
void print_table1(std::ostream& os, const std::vector<int>& clusters);

}  // namespace v2x::harness
