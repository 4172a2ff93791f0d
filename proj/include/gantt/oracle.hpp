#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gantt/instance.hpp"
#include "gantt/schedule.hpp"

namespace gantt {

/// Symmetry-breaking order over valid schedules: objective first, then
/// the per-tag slot vector, then the per-tag carrier vector (both indexed
/// by ascending TagId, slots 1-based).
struct ScheduleKey {
  std::int64_t objective = 0;
  std::vector<int> slot_of_tag;
  std::vector<int> carrier_of_tag;

  auto operator<=>(const ScheduleKey&) const = default;
};

/// Requires a schedule passing validate(strict=false).
ScheduleKey schedule_key(const ProblemInstance& inst, const Schedule& sched);

// Exhaustive ground truth for toy instances.
struct OracleLimits {
  int max_nodes = 5;
  int max_tags = 4;
  std::optional<int> max_slots;  // defaults to T
  std::size_t max_optima = 1'000'000;
};

struct OracleResult {
  std::int64_t best_objective = 0;
  std::vector<Schedule> optima;
  bool overflow = false;  // more optima existed than max_optima
};

/// Enumerates every valid schedule of length <= max_slots whose slots each
/// interrogate at least one tag. Throws kLimitsExceeded.
OracleResult enumerate_optimal(const ProblemInstance& inst, const OracleLimits& limits = {});

/// The optimum minimizing ScheduleKey. Throws kLimitsExceeded.
Schedule lexicographic_canonical(const ProblemInstance& inst, const OracleLimits& limits = {});

}  // namespace gantt
