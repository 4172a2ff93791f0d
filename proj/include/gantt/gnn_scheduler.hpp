#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gantt/gnn_engine.hpp"
#include "gantt/instance.hpp"
#include "gantt/rng.hpp"
#include "gantt/schedule.hpp"

namespace gantt {

struct SchedulingState {
  std::vector<std::set<TagId>> remaining;  // indexed by node index
  std::vector<Timeslot> slots_emitted;

  /// Every tag pending, nothing emitted.
  static SchedulingState initial(const ProblemInstance& inst);

  int remaining_count() const;
  /// Appends the slot and drops the tags it interrogates.
  void apply(const Timeslot& slot);
};

/// N x 3 rows of (remaining tag count, NodeId, lowest remaining TagId or 0),
/// raw integers as floats.
Matrix build_features(const ProblemInstance& inst, const SchedulingState& state);

struct SlotViolation {
  std::vector<ViolationKind> kinds;  // V2, V3 or V5, one entry per cause
  std::vector<std::string> causes;
};

using SlotPrediction = std::variant<Timeslot, SlotViolation>;

/// Per-node argmax (ties resolved C, then T, then O); each T-node takes its
/// lowest remaining tag. Returns SlotViolation when a T-node has nothing
/// left, an interrogating node does not see exactly one carrier, or nothing
/// is interrogated.
SlotPrediction decode_slot(const ProblemInstance& inst, const SchedulingState& state, const Matrix& probs);

/// forward() on the current features, then decode_slot().
SlotPrediction predict_slot(const ProblemInstance& inst, const SchedulingState& state, const WeightBundle& bundle);

/// Node and tag ids renamed by random permutations.
struct Relabeling {
  std::vector<int> node_to;  // original node index -> relabeled index
  std::vector<int> tag_to;   // original tag index -> relabeled index

  static Relabeling random(int n, int t, Rng& rng);

  ProblemInstance apply(const ProblemInstance& inst) const;
  SchedulingState apply(const SchedulingState& state) const;
  /// Translates a slot expressed in relabeled ids back to the original ones.
  Timeslot map_back(const Timeslot& slot) const;
};

enum class Fallback { kHeuristic, kAbort };

struct FailSafePolicy {
  int max_retries = 32;
  std::uint64_t rng_seed = 0;
  Fallback fallback = Fallback::kHeuristic;
};

struct GnnStats {
  int retries_used = 0;
  bool fallback_used = false;
  int predicted_slots = 0;
  int fallback_slots = 0;
};

struct GnnResult {
  Schedule schedule;
  GnnStats stats;
};

/// Predicts one slot at a time until every tag is interrogated. A rejected
/// slot is retried under fresh random relabelings; after max_retries
/// consecutive rejections the remaining tags are finished by the greedy
/// scheduler, or kAbort is thrown when the policy says so. Throws kBadConfig
/// for a negative retry count.
GnnResult schedule_gnn(const ProblemInstance& inst, const WeightBundle& bundle, const FailSafePolicy& policy = {});

/// Fraction of instances scheduled with no retries and no fallback.
/// Throws kEmptyDataset.
double s_corr(std::span<const ProblemInstance> dataset, const WeightBundle& bundle, const FailSafePolicy& policy = {});

struct Proportion {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95%.
Proportion wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.96);

/// One supervised sample per slot replayed from a valid schedule.
struct TrainingSample {
  Matrix features;
  std::vector<Role> labels;
};

std::vector<TrainingSample> replay_samples(const ProblemInstance& inst, const Schedule& sched);

}  // namespace gantt
