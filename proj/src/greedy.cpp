#include "gantt/greedy.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gantt/error.hpp"

namespace gantt {

TieBreak tie_break_from_string(std::string_view name) {
  if (name == "lowest_node_id") return TieBreak::kLowestNodeId;
  if (name == "highest_degree_then_id") return TieBreak::kHighestDegreeThenId;
  throw Error(ErrorCode::kParseError, "unknown tie-break '" + std::string(name) + "'");
}

std::vector<Timeslot> greedy_complete(const ProblemInstance& inst, std::span<const std::set<TagId>> pending_in,
                                      const GreedyConfig& cfg) {
  const int n = inst.node_count();
  const auto un = static_cast<std::size_t>(n);
  if (pending_in.size() != un) throw Error(ErrorCode::kDimensionMismatch, "pending tags must be indexed by node");
  const auto& adj = inst.adjacency();

  std::vector<std::set<TagId>> pending(pending_in.begin(), pending_in.end());
  std::size_t left = 0;
  for (const auto& p : pending) left += p.size();

  std::vector<int> order(un);
  std::iota(order.begin(), order.end(), 0);
  if (cfg.tie_break == TieBreak::kHighestDegreeThenId) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return adj[static_cast<std::size_t>(a)].size() > adj[static_cast<std::size_t>(b)].size();
    });
  }

  std::vector<Timeslot> slots;
  std::vector<int> carrier_neighbors(un);
  std::vector<int> interrogating_neighbors(un);
  while (left > 0) {
    Timeslot slot = make_slot(n);
    std::vector<char> assigned(un, 0);
    std::fill(carrier_neighbors.begin(), carrier_neighbors.end(), 0);
    std::fill(interrogating_neighbors.begin(), interrogating_neighbors.end(), 0);

    auto coverable = [&](int h) {
      const auto uh = static_cast<std::size_t>(h);
      return !assigned[uh] && !pending[uh].empty() && carrier_neighbors[uh] == 0;
    };

    for (;;) {
      int best = -1;
      int best_gain = 0;
      for (int c : order) {
        const auto uc = static_cast<std::size_t>(c);
        // A new carrier must not add a second carrier to an interrogating host.
        if (assigned[uc] || interrogating_neighbors[uc] > 0) continue;
        int gain = 0;
        for (int h : adj[uc]) gain += coverable(h) ? 1 : 0;
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      if (best < 0) break;

      const auto ub = static_cast<std::size_t>(best);
      std::vector<int> covered;
      for (int h : adj[ub]) {
        if (coverable(h)) covered.push_back(h);
      }
      assigned[ub] = 1;
      slot.roles[ub] = Role::kCarrier;
      for (int u : adj[ub]) ++carrier_neighbors[static_cast<std::size_t>(u)];
      for (int h : covered) {
        const auto uh = static_cast<std::size_t>(h);
        assigned[uh] = 1;
        slot.roles[uh] = Role::kInterrogate;
        const TagId tag = *pending[uh].begin();
        pending[uh].erase(pending[uh].begin());
        slot.interrogations[NodeId::from_index(uh)] = tag;
        --left;
        for (int u : adj[uh]) ++interrogating_neighbors[static_cast<std::size_t>(u)];
      }
    }
    if (slot.interrogations.empty()) {
      // Unreachable on connected instances: a pending host always has a free neighbor.
      throw Error(ErrorCode::kInvalidSchedule, "greedy made no progress");
    }
    slots.push_back(std::move(slot));
  }
  return slots;
}

Schedule solve_greedy(const ProblemInstance& inst, const GreedyConfig& cfg) {
  std::vector<std::set<TagId>> pending(static_cast<std::size_t>(inst.node_count()));
  for (int t = 0; t < inst.tag_count(); ++t) {
    pending[static_cast<std::size_t>(inst.host_index()[static_cast<std::size_t>(t)])].insert(TagId(t + 1));
  }
  Schedule sched;
  sched.n = inst.node_count();
  sched.slots = greedy_complete(inst, pending, cfg);
  return sched;
}

}  // namespace gantt
