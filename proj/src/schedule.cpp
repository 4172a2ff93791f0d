#include "gantt/schedule.hpp"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "gantt/error.hpp"

namespace gantt {

char role_symbol(Role role) {
  switch (role) {
    case Role::kCarrier: return 'C';
    case Role::kInterrogate: return 'T';
    case Role::kOff: return 'O';
  }
  return '?';
}

Role role_from_symbol(char symbol) {
  switch (symbol) {
    case 'C': return Role::kCarrier;
    case 'T': return Role::kInterrogate;
    case 'O': return Role::kOff;
    default: throw Error(ErrorCode::kParseError, std::string("unknown role symbol '") + symbol + "'");
  }
}

Timeslot make_slot(int n) { return Timeslot{std::vector<Role>(static_cast<std::size_t>(n), Role::kOff), {}}; }

std::string_view violation_label(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kTagNotOnce: return "V1";
    case ViolationKind::kCarrierCount: return "V2";
    case ViolationKind::kBadInterrogation: return "V3";
    case ViolationKind::kIdleCarrier: return "V4";
    case ViolationKind::kEmptySlot: return "V5";
  }
  return "V?";
}

int ValidationReport::count(ViolationKind kind) const {
  return static_cast<int>(std::count_if(violations.begin(), violations.end(),
                                        [kind](const Violation& v) { return v.kind == kind; }));
}

ValidationReport validate(const ProblemInstance& inst, const Schedule& sched, bool strict) {
  const int n = inst.node_count();
  const int tag_total = inst.tag_count();
  if (sched.n != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "schedule width " + std::to_string(sched.n) + " != node count " + std::to_string(n));
  }
  for (std::size_t j = 0; j < sched.slots.size(); ++j) {
    if (sched.slots[j].roles.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::kDimensionMismatch, "slot " + std::to_string(j) + " has " +
                                                     std::to_string(sched.slots[j].roles.size()) + " roles");
    }
  }

  ValidationReport report;
  auto add = [&](std::optional<int> slot, ViolationKind kind, std::vector<NodeId> nodes, std::vector<TagId> tags,
                 std::string message) {
    report.violations.push_back({slot, kind, std::move(nodes), std::move(tags), std::move(message)});
  };

  std::vector<int> times_interrogated(static_cast<std::size_t>(tag_total), 0);
  std::vector<int> first_slot(static_cast<std::size_t>(tag_total), -1);

  for (std::size_t j = 0; j < sched.slots.size(); ++j) {
    const auto& slot = sched.slots[j];
    const int sj = static_cast<int>(j);
    const std::string where = "slot " + std::to_string(j) + ": ";

    // V3: the interrogation map must match the Interrogate roles and name hosted tags.
    for (const auto& [node, tag] : slot.interrogations) {
      if (node.value() < 1 || node.value() > n) {
        add(sj, ViolationKind::kBadInterrogation, {node}, {tag}, where + "interrogating node out of range");
        continue;
      }
      if (slot.roles[node.index()] != Role::kInterrogate) {
        add(sj, ViolationKind::kBadInterrogation, {node}, {tag},
            where + "node " + std::to_string(node.value()) + " interrogates without role T");
        continue;
      }
      if (tag.value() < 1 || tag.value() > tag_total) {
        add(sj, ViolationKind::kBadInterrogation, {node}, {tag}, where + "tag id out of range");
        continue;
      }
      if (inst.host_of(tag) != node) {
        add(sj, ViolationKind::kBadInterrogation, {node}, {tag},
            where + "node " + std::to_string(node.value()) + " does not host tag " + std::to_string(tag.value()));
        continue;
      }
      auto& times = times_interrogated[tag.index()];
      if (++times == 1) {
        first_slot[tag.index()] = sj;
      } else {
        add(sj, ViolationKind::kTagNotOnce, {node}, {tag},
            where + "tag " + std::to_string(tag.value()) + " already interrogated in slot " +
                std::to_string(first_slot[tag.index()]));
      }
    }
    for (int v = 0; v < n; ++v) {
      const NodeId id = NodeId::from_index(static_cast<std::size_t>(v));
      if (slot.roles[static_cast<std::size_t>(v)] == Role::kInterrogate && !slot.interrogations.contains(id)) {
        add(sj, ViolationKind::kBadInterrogation, {id}, {},
            where + "node " + std::to_string(v + 1) + " has role T but names no tag");
      }
    }

    // V2: every interrogating node sees exactly one carrier neighbor.
    for (const auto& [node, tag] : slot.interrogations) {
      if (node.value() < 1 || node.value() > n || slot.roles[node.index()] != Role::kInterrogate) continue;
      std::vector<NodeId> carriers;
      for (int u : inst.adjacency()[node.index()]) {
        if (slot.roles[static_cast<std::size_t>(u)] == Role::kCarrier) {
          carriers.push_back(NodeId::from_index(static_cast<std::size_t>(u)));
        }
      }
      if (carriers.size() != 1) {
        std::vector<NodeId> nodes{node};
        nodes.insert(nodes.end(), carriers.begin(), carriers.end());
        add(sj, ViolationKind::kCarrierCount, std::move(nodes), {tag},
            where + "tag " + std::to_string(tag.value()) + " at node " + std::to_string(node.value()) + " sees " +
                std::to_string(carriers.size()) + " carrier neighbors");
      }
    }

    if (!strict) continue;

    // V4: a carrier with no interrogating neighbor is wasted.
    for (int v = 0; v < n; ++v) {
      if (slot.roles[static_cast<std::size_t>(v)] != Role::kCarrier) continue;
      const auto& nbrs = inst.adjacency()[static_cast<std::size_t>(v)];
      const bool serves = std::any_of(nbrs.begin(), nbrs.end(), [&](int u) {
        return slot.roles[static_cast<std::size_t>(u)] == Role::kInterrogate &&
               slot.interrogations.contains(NodeId::from_index(static_cast<std::size_t>(u)));
      });
      if (!serves) {
        add(sj, ViolationKind::kIdleCarrier, {NodeId::from_index(static_cast<std::size_t>(v))}, {},
            where + "carrier " + std::to_string(v + 1) + " serves no interrogating neighbor");
      }
    }
    // V5
    if (slot.interrogations.empty()) add(sj, ViolationKind::kEmptySlot, {}, {}, where + "no tag interrogated");
  }

  for (int t = 0; t < tag_total; ++t) {
    if (times_interrogated[static_cast<std::size_t>(t)] == 0) {
      add(std::nullopt, ViolationKind::kTagNotOnce, {}, {TagId(t + 1)},
          "tag " + std::to_string(t + 1) + " is never interrogated");
    }
  }

  report.ok = report.violations.empty();
  return report;
}

ScheduleMetrics raw_metrics(int tag_count, const Schedule& sched) {
  ScheduleMetrics m;
  for (const auto& slot : sched.slots) {
    m.carriers += std::count(slot.roles.begin(), slot.roles.end(), Role::kCarrier);
  }
  m.length = sched.length();
  m.objective = static_cast<std::int64_t>(tag_count) * m.carriers + m.length;
  return m;
}

ScheduleMetrics metrics(const ProblemInstance& inst, const Schedule& sched) {
  const auto report = validate(inst, sched, false);
  if (!report.ok) {
    throw Error(ErrorCode::kInvalidSchedule, report.violations.front().message);
  }
  return raw_metrics(inst.tag_count(), sched);
}

std::int64_t carriers_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate) {
  return baseline.carriers - candidate.carriers;
}

std::int64_t timeslots_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate) {
  return baseline.length - candidate.length;
}

double percent_carriers_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate) {
  if (baseline.carriers == 0) throw Error(ErrorCode::kZeroBaseline, "baseline uses no carriers");
  return static_cast<double>(carriers_saved(baseline, candidate)) / static_cast<double>(baseline.carriers);
}

double percent_timeslots_saved(const ScheduleMetrics& baseline, const ScheduleMetrics& candidate) {
  if (baseline.length == 0) throw Error(ErrorCode::kZeroBaseline, "baseline has no timeslots");
  return static_cast<double>(timeslots_saved(baseline, candidate)) / static_cast<double>(baseline.length);
}

std::string serialize_schedule(const Schedule& sched) {
  nlohmann::ordered_json doc;
  doc["n"] = sched.n;
  auto slots = nlohmann::ordered_json::array();
  for (const auto& slot : sched.slots) {
    std::string roles;
    roles.reserve(slot.roles.size());
    for (Role r : slot.roles) roles.push_back(role_symbol(r));
    auto inter = nlohmann::ordered_json::object();
    for (const auto& [node, tag] : slot.interrogations) inter[std::to_string(node.value())] = tag.value();
    nlohmann::ordered_json js;
    js["roles"] = std::move(roles);
    js["interrogations"] = std::move(inter);
    slots.push_back(std::move(js));
  }
  doc["slots"] = std::move(slots);
  return doc.dump();
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

}  // namespace

Schedule parse_schedule(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) field_error("<root>", "expected an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) field_error("n", "expected an integer");
  if (!doc.contains("slots") || !doc["slots"].is_array()) field_error("slots", "expected an array");

  Schedule sched;
  sched.n = doc["n"].get<int>();
  if (sched.n < 0) field_error("n", "must be non-negative");
  const auto& jslots = doc["slots"];
  for (std::size_t j = 0; j < jslots.size(); ++j) {
    const std::string field = "slots[" + std::to_string(j) + "]";
    const auto& js = jslots[j];
    if (!js.is_object() || !js.contains("roles") || !js["roles"].is_string()) {
      field_error(field + ".roles", "expected a string");
    }
    const auto roles = js["roles"].get<std::string>();
    if (roles.size() != static_cast<std::size_t>(sched.n)) {
      field_error(field + ".roles", "length " + std::to_string(roles.size()) + " != n " + std::to_string(sched.n));
    }
    Timeslot slot;
    for (char c : roles) {
      try {
        slot.roles.push_back(role_from_symbol(c));
      } catch (const Error&) {
        field_error(field + ".roles", std::string("unknown role symbol '") + c + "'");
      }
    }
    if (js.contains("interrogations")) {
      const auto& inter = js["interrogations"];
      if (!inter.is_object()) field_error(field + ".interrogations", "expected an object");
      for (const auto& [key, value] : inter.items()) {
        if (key.empty() || key.size() > 9 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
          field_error(field + ".interrogations", "key '" + key + "' is not a node id");
        }
        if (!value.is_number_integer()) field_error(field + ".interrogations." + key, "expected a tag id");
        slot.interrogations[NodeId(std::stoi(key))] = TagId(value.get<int>());
      }
    }
    sched.slots.push_back(std::move(slot));
  }
  return sched;
}

std::string serialize_report(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["ok"] = report.ok;
  auto list = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json jv;
    jv["slot"] = v.slot ? nlohmann::ordered_json(*v.slot) : nlohmann::ordered_json(nullptr);
    jv["kind"] = std::string(violation_label(v.kind));
    auto nodes = nlohmann::ordered_json::array();
    for (auto id : v.nodes) nodes.push_back(id.value());
    auto tags = nlohmann::ordered_json::array();
    for (auto id : v.tags) tags.push_back(id.value());
    jv["nodes"] = std::move(nodes);
    jv["tags"] = std::move(tags);
    jv["message"] = v.message;
    list.push_back(std::move(jv));
  }
  doc["violations"] = std::move(list);
  return doc.dump();
}

}  // namespace gantt
