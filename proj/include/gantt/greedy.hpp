#pragma once

#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "gantt/instance.hpp"
#include "gantt/schedule.hpp"

namespace gantt {

enum class TieBreak { kLowestNodeId, kHighestDegreeThenId };

struct GreedyConfig {
  TieBreak tie_break = TieBreak::kLowestNodeId;
};

/// Throws kParseError for names other than "lowest_node_id" and
/// "highest_degree_then_id".
TieBreak tie_break_from_string(std::string_view name);

/// Max-coverage greedy baseline. Each slot repeatedly adds the carrier that
/// newly covers the most hosts with pending tags (hosts free this slot and
/// not next to an earlier carrier); every covered host interrogates its
/// lowest pending tag. Output always passes validate(strict=true).
Schedule solve_greedy(const ProblemInstance& inst, const GreedyConfig& cfg = {});

/// Same procedure restricted to the given pending tags (indexed by node).
std::vector<Timeslot> greedy_complete(const ProblemInstance& inst, std::span<const std::set<TagId>> pending,
                                      const GreedyConfig& cfg = {});

}  // namespace gantt
