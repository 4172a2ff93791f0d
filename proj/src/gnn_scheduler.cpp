#include "gantt/gnn_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gantt/error.hpp"
#include "gantt/greedy.hpp"

namespace gantt {

SchedulingState SchedulingState::initial(const ProblemInstance& inst) {
  SchedulingState state;
  state.remaining.resize(static_cast<std::size_t>(inst.node_count()));
  const auto& hosts = inst.host_index();
  for (std::size_t t = 0; t < hosts.size(); ++t) {
    state.remaining[static_cast<std::size_t>(hosts[t])].insert(TagId::from_index(t));
  }
  return state;
}

int SchedulingState::remaining_count() const {
  std::size_t total = 0;
  for (const auto& tags : remaining) total += tags.size();
  return static_cast<int>(total);
}

void SchedulingState::apply(const Timeslot& slot) {
  for (auto [node, tag] : slot.interrogations) remaining.at(node.index()).erase(tag);
  slots_emitted.push_back(slot);
}

Matrix build_features(const ProblemInstance& inst, const SchedulingState& state) {
  const auto n = static_cast<std::size_t>(inst.node_count());
  if (state.remaining.size() != n) throw Error(ErrorCode::kDimensionMismatch, "state width differs from instance");
  Matrix x(n, 3);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& tags = state.remaining[v];
    x(v, 0) = static_cast<float>(tags.size());
    x(v, 1) = static_cast<float>(v + 1);
    x(v, 2) = tags.empty() ? 0.0f : static_cast<float>(tags.begin()->value());
  }
  return x;
}

SlotPrediction decode_slot(const ProblemInstance& inst, const SchedulingState& state, const Matrix& probs) {
  const int n = inst.node_count();
  const auto un = static_cast<std::size_t>(n);
  if (probs.rows() != un || probs.cols() != 3 || state.remaining.size() != un) {
    throw Error(ErrorCode::kDimensionMismatch, "probabilities must be N x 3");
  }
  Timeslot slot = make_slot(n);
  for (std::size_t v = 0; v < un; ++v) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < 3; ++c) {
      if (probs(v, c) > probs(v, best)) best = c;
    }
    slot.roles[v] = static_cast<Role>(best);
  }

  SlotViolation bad;
  auto fail = [&](ViolationKind kind, std::string cause) {
    bad.kinds.push_back(kind);
    bad.causes.push_back(std::move(cause));
  };
  const auto& adj = inst.adjacency();
  for (std::size_t v = 0; v < un; ++v) {
    if (slot.roles[v] != Role::kInterrogate) continue;
    const NodeId node = NodeId::from_index(v);
    if (state.remaining[v].empty()) {
      fail(ViolationKind::kBadInterrogation, "node " + std::to_string(node.value()) + " has no remaining tag");
      continue;
    }
    slot.interrogations.emplace(node, *state.remaining[v].begin());
    const auto carriers = std::count_if(adj[v].begin(), adj[v].end(), [&](int p) {
      return slot.roles[static_cast<std::size_t>(p)] == Role::kCarrier;
    });
    if (carriers != 1) {
      fail(ViolationKind::kCarrierCount,
           "node " + std::to_string(node.value()) + " sees " + std::to_string(carriers) + " carriers");
    }
  }
  if (slot.interrogations.empty()) fail(ViolationKind::kEmptySlot, "no tag interrogated");
  if (!bad.kinds.empty()) return bad;
  return slot;
}

SlotPrediction predict_slot(const ProblemInstance& inst, const SchedulingState& state, const WeightBundle& bundle) {
  return decode_slot(inst, state, forward(build_features(inst, state), inst.adjacency(), bundle));
}

Relabeling Relabeling::random(int n, int t, Rng& rng) {
  Relabeling r;
  r.node_to.resize(static_cast<std::size_t>(n));
  r.tag_to.resize(static_cast<std::size_t>(t));
  std::iota(r.node_to.begin(), r.node_to.end(), 0);
  std::iota(r.tag_to.begin(), r.tag_to.end(), 0);
  rng.shuffle(std::span(r.node_to));
  rng.shuffle(std::span(r.tag_to));
  return r;
}

ProblemInstance Relabeling::apply(const ProblemInstance& inst) const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(inst.edges().size());
  for (auto [u, v] : inst.edges()) {
    edges.emplace_back(node_to[u.index()] + 1, node_to[v.index()] + 1);
  }
  std::map<int, int> tags;
  const auto& hosts = inst.host_index();
  for (std::size_t t = 0; t < hosts.size(); ++t) {
    tags[tag_to[t] + 1] = node_to[static_cast<std::size_t>(hosts[t])] + 1;
  }
  return ProblemInstance::create(inst.node_count(), edges, tags);
}

SchedulingState Relabeling::apply(const SchedulingState& state) const {
  SchedulingState out;
  out.remaining.resize(state.remaining.size());
  for (std::size_t v = 0; v < state.remaining.size(); ++v) {
    auto& dst = out.remaining[static_cast<std::size_t>(node_to[v])];
    for (TagId tag : state.remaining[v]) dst.insert(TagId::from_index(static_cast<std::size_t>(tag_to[tag.index()])));
  }
  return out;
}

Timeslot Relabeling::map_back(const Timeslot& slot) const {
  std::vector<int> node_from(node_to.size());
  for (std::size_t v = 0; v < node_to.size(); ++v) node_from[static_cast<std::size_t>(node_to[v])] = static_cast<int>(v);
  std::vector<int> tag_from(tag_to.size());
  for (std::size_t t = 0; t < tag_to.size(); ++t) tag_from[static_cast<std::size_t>(tag_to[t])] = static_cast<int>(t);

  Timeslot out = make_slot(static_cast<int>(node_to.size()));
  for (std::size_t w = 0; w < slot.roles.size(); ++w) out.roles[static_cast<std::size_t>(node_from[w])] = slot.roles[w];
  for (auto [node, tag] : slot.interrogations) {
    out.interrogations.emplace(NodeId::from_index(static_cast<std::size_t>(node_from[node.index()])),
                               TagId::from_index(static_cast<std::size_t>(tag_from[tag.index()])));
  }
  return out;
}

GnnResult schedule_gnn(const ProblemInstance& inst, const WeightBundle& bundle, const FailSafePolicy& policy) {
  if (policy.max_retries < 0) throw Error(ErrorCode::kBadConfig, "max_retries must be non-negative");
  validate_bundle(bundle);
  GnnResult result;
  result.schedule.n = inst.node_count();
  SchedulingState state = SchedulingState::initial(inst);
  Rng rng(policy.rng_seed);

  while (state.remaining_count() > 0) {
    SlotPrediction pred = predict_slot(inst, state, bundle);
    int attempt = 0;
    while (std::holds_alternative<SlotViolation>(pred) && attempt < policy.max_retries) {
      ++attempt;
      ++result.stats.retries_used;
      const Relabeling relabel = Relabeling::random(inst.node_count(), inst.tag_count(), rng);
      pred = predict_slot(relabel.apply(inst), relabel.apply(state), bundle);
      if (auto* slot = std::get_if<Timeslot>(&pred)) pred = relabel.map_back(*slot);
    }
    if (auto* slot = std::get_if<Timeslot>(&pred)) {
      state.apply(*slot);
      ++result.stats.predicted_slots;
      continue;
    }
    if (policy.fallback == Fallback::kAbort) {
      throw Error(ErrorCode::kAbort, "slot " + std::to_string(state.slots_emitted.size() + 1) + " rejected after " +
                                         std::to_string(policy.max_retries) + " retries");
    }
    result.stats.fallback_used = true;
    for (const Timeslot& fill : greedy_complete(inst, state.remaining)) {
      state.apply(fill);
      ++result.stats.fallback_slots;
    }
  }
  result.schedule.slots = std::move(state.slots_emitted);
  return result;
}

double s_corr(std::span<const ProblemInstance> dataset, const WeightBundle& bundle, const FailSafePolicy& policy) {
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "s_corr needs at least one instance");
  std::size_t clean = 0;
  for (const auto& inst : dataset) {
    try {
      const GnnResult r = schedule_gnn(inst, bundle, policy);
      if (r.stats.retries_used == 0 && !r.stats.fallback_used) ++clean;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAbort) throw;
    }
  }
  return static_cast<double>(clean) / static_cast<double>(dataset.size());
}

Proportion wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw Error(ErrorCode::kBadConfig, "need 0 <= successes <= trials and trials > 0");
  }
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<TrainingSample> replay_samples(const ProblemInstance& inst, const Schedule& sched) {
  if (!validate(inst, sched, false).ok) throw Error(ErrorCode::kInvalidSchedule, "replay needs a valid schedule");
  std::vector<TrainingSample> samples;
  SchedulingState state = SchedulingState::initial(inst);
  for (const Timeslot& slot : sched.slots) {
    samples.push_back({build_features(inst, state), slot.roles});
    state.apply(slot);
  }
  return samples;
}

}  // namespace gantt
