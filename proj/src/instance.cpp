#include "gantt/instance.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "gantt/error.hpp"
#include "gantt/io.hpp"

namespace gantt {

namespace {

bool is_connected(int n, const std::vector<std::vector<int>>& adjacency) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adjacency[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

}  // namespace

ProblemInstance ProblemInstance::create(int n, std::span<const std::pair<int, int>> edges,
                                        const std::map<int, int>& tag_hosts) {
  if (n < 2) throw Error(ErrorCode::kBadNodeCount, "an instance needs at least 2 nodes, got " + std::to_string(n));

  ProblemInstance inst;
  inst.n_ = n;
  const auto un = static_cast<std::size_t>(n);
  inst.adjacency_.assign(un, {});
  inst.adjacency_matrix_.assign(un * un, 0);

  for (auto [a, b] : edges) {
    if (a == b) throw Error(ErrorCode::kSelfLoop, "edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    if (a < 1 || a > n || b < 1 || b > n) {
      throw Error(ErrorCode::kBadNodeId,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") outside 1.." + std::to_string(n));
    }
    const int u = std::min(a, b) - 1;
    const int v = std::max(a, b) - 1;
    auto& cell = inst.adjacency_matrix_[static_cast<std::size_t>(u * n + v)];
    if (cell) {
      throw Error(ErrorCode::kDuplicateEdge, "edge (" + std::to_string(u + 1) + "," + std::to_string(v + 1) + ")");
    }
    cell = 1;
    inst.adjacency_matrix_[static_cast<std::size_t>(v * n + u)] = 1;
    inst.adjacency_[static_cast<std::size_t>(u)].push_back(v);
    inst.adjacency_[static_cast<std::size_t>(v)].push_back(u);
    inst.edges_.emplace_back(NodeId(u + 1), NodeId(v + 1));
  }
  std::sort(inst.edges_.begin(), inst.edges_.end());
  for (auto& list : inst.adjacency_) std::sort(list.begin(), list.end());

  if (!is_connected(n, inst.adjacency_)) throw Error(ErrorCode::kDisconnectedGraph, "node graph is not connected");

  // std::map iterates keys ascending, so contiguity is a single scan.
  int expected = 1;
  inst.hosted_.assign(un, {});
  for (auto [tag, host] : tag_hosts) {
    if (tag != expected) {
      throw Error(ErrorCode::kBadTagIds, "tag ids must be contiguous 1..T; missing or unexpected id near " +
                                             std::to_string(expected));
    }
    if (host < 1 || host > n) {
      throw Error(ErrorCode::kBadHost, "tag " + std::to_string(tag) + " hosted by node " + std::to_string(host) +
                                           " outside 1.." + std::to_string(n));
    }
    inst.tag_hosts_.push_back(host - 1);
    inst.hosted_[static_cast<std::size_t>(host - 1)].push_back(tag - 1);
    ++expected;
  }
  return inst;
}

NodeId ProblemInstance::host_of(TagId tag) const {
  if (tag.value() < 1 || tag.value() > tag_count()) {
    throw Error(ErrorCode::kBadTagIds, "tag " + std::to_string(tag.value()) + " not in instance");
  }
  return NodeId::from_index(static_cast<std::size_t>(tag_hosts_[tag.index()]));
}

std::set<NodeId> ProblemInstance::neighbors(NodeId v) const {
  if (v.value() < 1 || v.value() > n_) {
    throw Error(ErrorCode::kBadNodeId, "node " + std::to_string(v.value()) + " not in 1.." + std::to_string(n_));
  }
  std::set<NodeId> out;
  for (int u : adjacency_[v.index()]) out.insert(NodeId::from_index(static_cast<std::size_t>(u)));
  return out;
}

std::string serialize_instance(const ProblemInstance& inst) {
  nlohmann::ordered_json doc;
  doc["n"] = inst.node_count();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [u, v] : inst.edges()) edges.push_back({u.value(), v.value()});
  doc["edges"] = std::move(edges);
  auto tags = nlohmann::ordered_json::object();
  for (int t = 0; t < inst.tag_count(); ++t) {
    tags[std::to_string(t + 1)] = inst.host_index()[static_cast<std::size_t>(t)] + 1;
  }
  doc["tags"] = std::move(tags);
  return doc.dump();
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

int parse_positive_key(const std::string& key, const std::string& field) {
  if (key.empty() || key.size() > 9 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    field_error(field, "key '" + key + "' is not a positive integer");
  }
  return std::stoi(key);
}

}  // namespace

ProblemInstance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) field_error("<root>", "expected an object");
  for (const char* key : {"n", "edges", "tags"}) {
    if (!doc.contains(key)) field_error(key, "missing");
  }
  if (!doc["n"].is_number_integer()) field_error("n", "expected an integer");
  const int n = doc["n"].get<int>();

  const auto& jedges = doc["edges"];
  if (!jedges.is_array()) field_error("edges", "expected an array");
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const auto& e = jedges[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      field_error("edges[" + std::to_string(i) + "]", "expected [u, v] with integer ids");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }

  const auto& jtags = doc["tags"];
  if (!jtags.is_object()) field_error("tags", "expected an object");
  std::map<int, int> tags;
  for (const auto& [key, value] : jtags.items()) {
    const int tag = parse_positive_key(key, "tags");
    if (!value.is_number_integer()) field_error("tags." + key, "expected an integer host id");
    tags[tag] = value.get<int>();
  }
  return ProblemInstance::create(n, edges, tags);
}

ProblemInstance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

void save_instance(const ProblemInstance& inst, const std::string& path) {
  write_file(path, serialize_instance(inst) + "\n");
}

}  // namespace gantt
