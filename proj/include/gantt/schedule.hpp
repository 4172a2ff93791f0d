#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gantt/ids.hpp"
#include "gantt/instance.hpp"

namespace gantt {

enum class Role : std::uint8_t { kCarrier, kInterrogate, kOff };

char role_symbol(Role role);
/// Throws kParseError for anything other than 'C', 'T' or 'O'.
Role role_from_symbol(char symbol);

struct Timeslot {
  std::vector<Role> roles;                   // index = NodeId - 1
  std::map<NodeId, TagId> interrogations;    // one entry per Interrogate node

  bool operator==(const Timeslot&) const = default;
};

struct Schedule {
  int n = 0;
  std::vector<Timeslot> slots;

  int length() const { return static_cast<int>(slots.size()); }
  bool operator==(const Schedule&) const = default;
};

/// Builds an empty slot of width n with every node Off.
Timeslot make_slot(int n);

enum class ViolationKind {
  kTagNotOnce,        // V1
  kCarrierCount,      // V2
  kBadInterrogation,  // V3
  kIdleCarrier,       // V4, strict only
  kEmptySlot,         // V5, strict only
};

std::string_view violation_label(ViolationKind kind);  // "V1".."V5"

struct Violation {
  std::optional<int> slot;  // 0-based; empty for schedule-wide findings
  ViolationKind kind;
  std::vector<NodeId> nodes;
  std::vector<TagId> tags;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  int count(ViolationKind kind) const;
};

/// Checks a schedule against the instance constraints. Throws
/// kDimensionMismatch when the schedule or a slot is not n wide.
ValidationReport validate(const ProblemInstance& inst, const Schedule& sched, bool strict);

struct ScheduleMetrics {
  std::int64_t carriers = 0;
  std::int64_t length = 0;
  std::int64_t objective = 0;  // T * carriers + length

  bool operator==(const ScheduleMetrics&) const = default;
};

/// Throws kInvalidSchedule if validate(strict=false) fails.
ScheduleMetrics metrics(const ProblemInstance& inst, const Schedule& sched);

/// Computes the metric fields without validating.
ScheduleMetrics raw_metrics(int tag_count, const Schedule& sched);

// Savings are positive when the candidate is better than the baseline.
std::int64_t carriers_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate);
std::int64_t timeslots_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate);
/// Throws kZeroBaseline when the baseline uses no carriers.
double percent_carriers_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate);
/// Throws kZeroBaseline when the baseline has no slots.
double percent_timeslots_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate);

std::string serialize_schedule(const Schedule& sched);
Schedule parse_schedule(const std::string& text);

std::string serialize_report(const ValidationReport& report);

}  // namespace gantt
