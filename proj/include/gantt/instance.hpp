#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gantt/ids.hpp"

namespace gantt {

using Edge = std::pair<NodeId, NodeId>;

/// A carrier-scheduling problem: a connected node graph, a set of tags and
/// the node hosting each tag. Immutable once constructed.
class ProblemInstance {
 public:
  /// Validates and builds an instance. Edges may be given in either
  /// orientation; they are stored as (u, v) with u < v, sorted.
  /// Throws Error with kBadNodeCount, kSelfLoop, kDuplicateEdge, kBadNodeId,
  /// kDisconnectedGraph, kBadTagIds or kBadHost.
  static ProblemInstance create(int n, std::span<const std::pair<int, int>> edges,
                                const std::map<int, int>& tag_hosts);

  int node_count() const { return n_; }
  int tag_count() const { return static_cast<int>(tag_hosts_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }

  NodeId host_of(TagId tag) const;

  /// Neighbors of v in ascending id order. Throws kBadNodeId.
  std::set<NodeId> neighbors(NodeId v) const;

  // Index-based views for the schedulers: 0-based node and tag indices.
  const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
  const std::vector<int>& host_index() const { return tag_hosts_; }
  /// Tags hosted by each node, ascending.
  const std::vector<std::vector<int>>& hosted() const { return hosted_; }
  bool adjacent(int u, int v) const { return adjacency_matrix_[static_cast<std::size_t>(u * n_ + v)] != 0; }

  bool operator==(const ProblemInstance& other) const {
    return n_ == other.n_ && edges_ == other.edges_ && tag_hosts_ == other.tag_hosts_;
  }

 private:
  ProblemInstance() = default;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> tag_hosts_;  // tag index -> host node index
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> hosted_;
  std::vector<std::uint8_t> adjacency_matrix_;
};

struct GeneratorConfig {
  int n = 10;
  int t = 14;
  double density = 1.0;  // nodes per unit area (or volume in 3D)
  double radius = 1.5;
  std::uint64_t seed = 0;
  int dimensions = 2;  // 2 or 3
  int max_attempts = 10000;
};

/// Random geometric graph: n points uniform in a square (cube) of side
/// (n/density)^(1/dim), edges between pairs within `radius`, placements
/// resampled until connected; tags assigned to uniformly random hosts.
/// Throws kBadConfig or kGenerationBudgetExceeded.
ProblemInstance generate_random_geometric(const GeneratorConfig& cfg);

/// Canonical instance JSON: {"n":..,"edges":[[u,v],..],"tags":{"1":h,..}}.
std::string serialize_instance(const ProblemInstance& inst);

/// Throws kParseError (with position or field), or any create() error.
ProblemInstance parse_instance(const std::string& text);

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

}  // namespace gantt
