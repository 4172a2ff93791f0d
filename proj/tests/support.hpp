#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gantt/instance.hpp"
#include "gantt/rng.hpp"
#include "gantt/schedule.hpp"

namespace gantt::testing {

inline ProblemInstance make(int n, std::vector<std::pair<int, int>> edges, std::map<int, int> tags) {
  return ProblemInstance::create(n, edges, tags);
}

// v1 -- v2, t1 on v1.
inline ProblemInstance minimal() { return make(2, {{1, 2}}, {{1, 1}}); }
// v1 -- v2 -- v3, t1 on v1, t2 on v3.
inline ProblemInstance path3() { return make(3, {{1, 2}, {2, 3}}, {{1, 1}, {2, 3}}); }
// Center v1 hosts t1 and t2; leaves v2, v3.
inline ProblemInstance star() { return make(3, {{1, 2}, {1, 3}}, {{1, 1}, {2, 1}}); }
// v1 hosts t1, v2 hosts t2.
inline ProblemInstance mutual_pair() { return make(2, {{1, 2}}, {{1, 1}, {2, 2}}); }
inline ProblemInstance triangle() { return make(3, {{1, 2}, {1, 3}, {2, 3}}, {{1, 1}}); }
// Triangle where v1 hosts two tags. Greedy spends its first carrier on v1,
// covering v2 and v3, and then needs two more slots for v1's tags; the
// optimum keeps v1 interrogating in both slots.
inline ProblemInstance reuse_miss() {
  return make(3, {{1, 2}, {1, 3}, {2, 3}}, {{1, 1}, {2, 3}, {3, 2}, {4, 1}});
}

/// Slot from a role string such as "TC" plus 1-based (node, tag) pairs.
inline Timeslot slot(const char* roles, std::vector<std::pair<int, int>> interrogations = {}) {
  Timeslot s;
  for (const char* c = roles; *c; ++c) s.roles.push_back(role_from_symbol(*c));
  for (auto [v, t] : interrogations) s.interrogations.emplace(NodeId(v), TagId(t));
  return s;
}

inline Schedule schedule(int n, std::vector<Timeslot> slots) { return Schedule{n, std::move(slots)}; }

/// Random connected simple graph on n nodes (edge probability p, resampled
/// until connected) with t tags on uniformly drawn hosts.
inline ProblemInstance random_small(Rng& rng, int n, int t, double p = 0.5) {
  for (;;) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= n; ++u) {
      for (int v = u + 1; v <= n; ++v) {
        if (rng.uniform() < p) edges.emplace_back(u, v);
      }
    }
    std::vector<int> comp(static_cast<std::size_t>(n + 1));
    for (int v = 1; v <= n; ++v) comp[static_cast<std::size_t>(v)] = v;
    auto find = [&](int v) {
      while (comp[static_cast<std::size_t>(v)] != v) v = comp[static_cast<std::size_t>(v)];
      return v;
    };
    int parts = n;
    for (auto [u, v] : edges) {
      const int a = find(u), b = find(v);
      if (a != b) {
        comp[static_cast<std::size_t>(a)] = b;
        --parts;
      }
    }
    if (parts != 1) continue;
    std::map<int, int> tags;
    for (int k = 1; k <= t; ++k) tags[k] = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    return ProblemInstance::create(n, edges, tags);
  }
}

/// Every connected labeled graph on n nodes, as edge lists.
inline std::vector<std::vector<std::pair<int, int>>> connected_graphs(int n) {
  std::vector<std::pair<int, int>> all;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) all.emplace_back(u, v);
  }
  std::vector<std::vector<std::pair<int, int>>> out;
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask & (1u << i)) edges.push_back(all[i]);
    }
    std::vector<int> seen(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (auto [a, b] : edges) {
        const int w = a == v ? b : (b == v ? a : 0);
        if (w != 0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached == n) out.push_back(std::move(edges));
  }
  return out;
}

}  // namespace gantt::testing
