#include "gantt/oracle.hpp"

#include <limits>
#include <string>

#include "gantt/error.hpp"

namespace gantt {

ScheduleKey schedule_key(const ProblemInstance& inst, const Schedule& sched) {
  ScheduleKey key;
  key.objective = raw_metrics(inst.tag_count(), sched).objective;
  const auto tags = static_cast<std::size_t>(inst.tag_count());
  key.slot_of_tag.assign(tags, 0);
  key.carrier_of_tag.assign(tags, 0);
  for (std::size_t j = 0; j < sched.slots.size(); ++j) {
    const auto& slot = sched.slots[j];
    for (const auto& [node, tag] : slot.interrogations) {
      key.slot_of_tag[tag.index()] = static_cast<int>(j) + 1;
      for (int u : inst.adjacency()[node.index()]) {
        if (slot.roles[static_cast<std::size_t>(u)] == Role::kCarrier) {
          key.carrier_of_tag[tag.index()] = u + 1;
          break;
        }
      }
    }
  }
  return key;
}

namespace {

// Depth-first over whole schedules: each level fixes one slot, chosen by
// enumerating every C/T/O role vector and every hosted-tag choice for the
// T nodes. Only branches strictly costlier than the best found are cut.
class Enumerator {
 public:
  Enumerator(const ProblemInstance& inst, const OracleLimits& limits)
      : inst_(inst),
        limits_(limits),
        n_(inst.node_count()),
        tags_(inst.tag_count()),
        max_slots_(limits.max_slots.value_or(inst.tag_count())),
        remaining_(static_cast<std::size_t>(inst.tag_count()), 1) {
    schedule_.n = n_;
  }

  void run() { extend(tags_, 0); }

  bool found() const { return have_best_; }
  OracleResult take_result() { return std::move(result_); }
  Schedule take_best() { return std::move(best_schedule_); }

 private:
  void extend(int remaining_count, std::int64_t carriers) {
    const std::int64_t cost = static_cast<std::int64_t>(tags_) * carriers + schedule_.length();
    if (have_best_ && cost > result_.best_objective) return;
    if (remaining_count == 0) {
      record(cost);
      return;
    }
    if (schedule_.length() == max_slots_) return;

    slot_ = make_slot(n_);
    assign(0, remaining_count, carriers);
  }

  void assign(int v, int remaining_count, std::int64_t carriers) {
    if (v == n_) {
      close_slot(remaining_count, carriers);
      return;
    }
    const auto uv = static_cast<std::size_t>(v);
    const NodeId id = NodeId::from_index(uv);

    slot_.roles[uv] = Role::kCarrier;
    assign(v + 1, remaining_count, carriers);

    slot_.roles[uv] = Role::kInterrogate;
    for (int t : inst_.hosted()[uv]) {
      if (!remaining_[static_cast<std::size_t>(t)]) continue;
      slot_.interrogations[id] = TagId(t + 1);
      assign(v + 1, remaining_count, carriers);
    }
    slot_.interrogations.erase(id);

    slot_.roles[uv] = Role::kOff;
    assign(v + 1, remaining_count, carriers);
  }

  void close_slot(int remaining_count, std::int64_t carriers) {
    if (slot_.interrogations.empty()) return;
    std::int64_t slot_carriers = 0;
    for (Role r : slot_.roles) slot_carriers += r == Role::kCarrier ? 1 : 0;
    const std::int64_t cost =
        static_cast<std::int64_t>(tags_) * (carriers + slot_carriers) + schedule_.length() + 1;
    if (have_best_ && cost > result_.best_objective) return;
    for (const auto& [node, tag] : slot_.interrogations) {
      int count = 0;
      for (int u : inst_.adjacency()[node.index()]) {
        count += slot_.roles[static_cast<std::size_t>(u)] == Role::kCarrier ? 1 : 0;
      }
      if (count != 1) return;
    }

    const Timeslot saved = slot_;
    for (const auto& [node, tag] : saved.interrogations) remaining_[tag.index()] = 0;
    schedule_.slots.push_back(saved);
    extend(remaining_count - static_cast<int>(saved.interrogations.size()), carriers + slot_carriers);
    schedule_.slots.pop_back();
    for (const auto& [node, tag] : saved.interrogations) remaining_[tag.index()] = 1;
    slot_ = saved;
  }

  void record(std::int64_t cost) {
    if (!have_best_ || cost < result_.best_objective) {
      have_best_ = true;
      result_.best_objective = cost;
      result_.optima.clear();
      result_.overflow = false;
      best_key_.reset();
    }
    if (result_.optima.size() < limits_.max_optima) {
      result_.optima.push_back(schedule_);
    } else {
      result_.overflow = true;
    }
    ScheduleKey key = schedule_key(inst_, schedule_);
    if (!best_key_ || key < *best_key_) {
      best_key_ = std::move(key);
      best_schedule_ = schedule_;
    }
  }

  const ProblemInstance& inst_;
  const OracleLimits& limits_;
  const int n_;
  const int tags_;
  const int max_slots_;
  std::vector<char> remaining_;
  Schedule schedule_;
  Timeslot slot_;

  bool have_best_ = false;
  OracleResult result_;
  std::optional<ScheduleKey> best_key_;
  Schedule best_schedule_;
};

void check_limits(const ProblemInstance& inst, const OracleLimits& limits) {
  if (limits.max_nodes < 1 || limits.max_tags < 1 || (limits.max_slots && *limits.max_slots < 1)) {
    throw Error(ErrorCode::kLimitsExceeded, "oracle limits must be positive");
  }
  if (inst.node_count() > limits.max_nodes || inst.tag_count() > limits.max_tags) {
    throw Error(ErrorCode::kLimitsExceeded, "instance with N=" + std::to_string(inst.node_count()) +
                                                " T=" + std::to_string(inst.tag_count()) + " exceeds oracle limits");
  }
}

}  // namespace

OracleResult enumerate_optimal(const ProblemInstance& inst, const OracleLimits& limits) {
  check_limits(inst, limits);
  Enumerator e(inst, limits);
  e.run();
  if (!e.found()) throw Error(ErrorCode::kLimitsExceeded, "no valid schedule within max_slots");
  return e.take_result();
}

Schedule lexicographic_canonical(const ProblemInstance& inst, const OracleLimits& limits) {
  check_limits(inst, limits);
  Enumerator e(inst, limits);
  e.run();
  if (!e.found()) throw Error(ErrorCode::kLimitsExceeded, "no valid schedule within max_slots");
  return e.take_best();
}

}  // namespace gantt
