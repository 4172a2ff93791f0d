#pragma once

#include <cstdint>
#include <vector>

#include "gantt/instance.hpp"
#include "gantt/schedule.hpp"

namespace gantt {

struct SolverBudget {
  double max_wall_seconds = 60.0;
  std::int64_t max_search_nodes = 2'000'000'000;
};

struct SolveStats {
  std::int64_t search_nodes_expanded = 0;
  std::int64_t prunes_by_bound = 0;
  std::int64_t states_solved = 0;
  double wall_seconds = 0.0;
  bool proved_optimal = false;
  /// Objective of each successive incumbent, starting with the greedy seed.
  std::vector<std::int64_t> incumbent_history;
};

struct SolveResult {
  Schedule schedule;
  SolveStats stats;
};

/// Branch-and-bound over slots. Each slot takes the lowest pending tag,
/// then decides the remaining hosts in ascending lowest-tag order
/// (include before defer, carriers in ascending NodeId); completed
/// sub-problems are memoized on the per-host pending counts. When
/// proved_optimal, the schedule is the optimum with the smallest
/// (slot vector, carrier vector) key, i.e. the lexicographic canonical one.
/// On budget exhaustion returns the best incumbent with proved_optimal=false.
SolveResult solve_optimal(const ProblemInstance& inst, const SolverBudget& budget = {});

// Admissible completion bound.
struct BoundOptions {
  /// Cap a carrier's per-slot coverage at the number of neighboring hosts
  /// with pending tags (one interrogation per host per slot). When false,
  /// the cap is the number of pending tags on neighbors.
  bool per_host_coverage = true;
  /// Every future slot needs its own carrier, so carrier-slots >= slots.
  bool slot_carrier_coupling = true;
};

struct PartialState {
  std::vector<int> pending_per_node;  // pending tag count, indexed by node
  std::int64_t objective_so_far = 0;  // T * carriers used + slots used
};

struct LowerBound {
  std::int64_t carrier_slots = 0;  // b1
  std::int64_t slots = 0;          // b2
  std::int64_t total = 0;          // objective_so_far + T * b1 + b2
};

LowerBound lower_bound(const ProblemInstance& inst, const PartialState& state, const BoundOptions& options = {});

}  // namespace gantt
