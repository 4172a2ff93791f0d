#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gantt/schedule.hpp"

namespace gantt::cli {

enum ExitCode : int { kOk = 0, kBadArgs = 2, kValidationFailure = 3, kBudgetExhausted = 4 };

/// Runs the `gantt` command line. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One scheduler run on one instance.
struct RunRecord {
  std::string instance;
  std::string scheduler;
  ScheduleMetrics metrics;
  double wall_seconds = 0.0;
  bool valid = false;
  std::optional<bool> proved_optimal;  // optimal only
  std::optional<int> retries;          // gnn only
  std::optional<bool> fallback_used;   // gnn only
  std::string error;                   // non-empty when the run failed
};

/// RFC-4180 field quoting.
std::string csv_field(std::string_view text);

/// Linear-interpolated quantile, q in [0, 1]; values need not be sorted.
double quantile(std::vector<double> values, double q);

/// Instance files of a dataset directory: the manifest's list when present,
/// otherwise every *.json except manifest.json, sorted by name.
std::vector<std::string> dataset_files(const std::string& dir);

}  // namespace gantt::cli
