#include <algorithm>

#include "doctest.h"
#include "gantt/error.hpp"
#include "gantt/exact_solver.hpp"
#include "gantt/gnn_scheduler.hpp"
#include "gantt/oracle.hpp"
#include "scalar_reference.hpp"
#include "support.hpp"

using namespace gantt;
using namespace gantt::testing;

namespace {

Matrix probs(std::vector<std::vector<float>> rows) {
  Matrix m(rows.size(), 3);
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  return m;
}

// Width-1 bundle whose blocks are identities: hosts with remaining tags
// become T, everything else C, independent of ids.
WeightBundle host_rule_bundle() {
  Hyperparameters hp;
  hp.blocks = 1;
  hp.heads = 1;
  hp.embed_dim = 1;
  hp.hidden_dim = 1;
  hp.head_dim = 1;
  hp.layer_norm = false;
  WeightBundle b = random_bundle(hp, 0);
  auto zero = [](DenseLayer& l) {
    std::fill(l.weight.data().begin(), l.weight.data().end(), 0.0f);
    std::fill(l.bias.begin(), l.bias.end(), 0.0f);
  };
  zero(b.embed);
  zero(b.input_proj);
  b.input_proj.weight(0, 0) = 1.0f;  // hidden = remaining count
  for (auto& blk : b.blocks) {
    for (auto& h : blk.heads) {
      zero(h.query);
      zero(h.key);
      zero(h.value);
    }
    zero(blk.update);
    zero(blk.ffn);
  }
  b.classifier.weight = Matrix(1, 3, std::vector<float>{-10.0f, 10.0f, 0.0f});
  b.classifier.bias = {5.0f, -5.0f, -100.0f};
  return b;
}

WeightBundle all_off_bundle() {
  auto b = host_rule_bundle();
  b.classifier.weight = Matrix(1, 3, 0.0f);
  b.classifier.bias = {0.0f, 0.0f, 1.0f};
  return b;
}

}  // namespace

TEST_CASE("features") {
  const auto inst = minimal();
  auto state = SchedulingState::initial(inst);
  const auto x = build_features(inst, state);
  CHECK(x.data() == std::vector<float>{1, 1, 1, 0, 2, 0});
  state.apply(slot("TC", {{1, 1}}));
  CHECK(build_features(inst, state).data() == std::vector<float>{0, 1, 0, 0, 2, 0});
  CHECK(state.remaining_count() == 0);

  const auto two = make(2, {{1, 2}}, {{1, 2}, {2, 2}, {3, 1}, {4, 2}, {5, 2}, {6, 2}, {7, 1}});
  const auto y = build_features(two, SchedulingState::initial(two));
  CHECK(y(0, 0) == 2);
  CHECK(y(0, 1) == 1);
  CHECK(y(0, 2) == 3);
}

TEST_CASE("decode_slot") {
  const auto inst = minimal();
  const auto state = SchedulingState::initial(inst);
  const auto ok = decode_slot(inst, state, probs({{0.1f, 0.8f, 0.1f}, {0.7f, 0.2f, 0.1f}}));
  REQUIRE(std::holds_alternative<Timeslot>(ok));
  CHECK(std::get<Timeslot>(ok) == slot("TC", {{1, 1}}));

  const auto all_c = decode_slot(inst, state, probs({{0.9f, 0.05f, 0.05f}, {0.9f, 0.05f, 0.05f}}));
  REQUIRE(std::holds_alternative<SlotViolation>(all_c));
  CHECK(std::get<SlotViolation>(all_c).kinds == std::vector<ViolationKind>{ViolationKind::kEmptySlot});

  // Exact ties resolve to C.
  const auto tie = decode_slot(inst, state, probs({{0.4f, 0.4f, 0.2f}, {1 / 3.f, 1 / 3.f, 1 / 3.f}}));
  CHECK(std::holds_alternative<SlotViolation>(tie));

  const auto tri = triangle();
  const auto two_carriers =
      decode_slot(tri, SchedulingState::initial(tri), probs({{0, 1, 0}, {1, 0, 0}, {1, 0, 0}}));
  REQUIRE(std::holds_alternative<SlotViolation>(two_carriers));
  CHECK(std::get<SlotViolation>(two_carriers).kinds == std::vector<ViolationKind>{ViolationKind::kCarrierCount});

  const auto nothing = decode_slot(inst, state, probs({{1, 0, 0}, {0, 1, 0}}));
  REQUIRE(std::holds_alternative<SlotViolation>(nothing));
  const auto& kinds = std::get<SlotViolation>(nothing).kinds;
  CHECK(std::find(kinds.begin(), kinds.end(), ViolationKind::kBadInterrogation) != kinds.end());
}

TEST_CASE("T-nodes pick their lowest remaining tag") {
  const auto inst = star();
  auto state = SchedulingState::initial(inst);
  state.remaining[0].erase(TagId(1));
  const auto r = decode_slot(inst, state, probs({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
  REQUIRE(std::holds_alternative<Timeslot>(r));
  CHECK(std::get<Timeslot>(r).interrogations.at(NodeId(1)) == TagId(2));
}

TEST_CASE("relabel and map back") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(rng.below(10));
    cfg.t = 1 + static_cast<int>(rng.below(14));
    cfg.seed = rng.next();
    const auto inst = generate_random_geometric(cfg);
    auto state = SchedulingState::initial(inst);
    for (auto& tags : state.remaining) {
      for (auto it = tags.begin(); it != tags.end();) it = rng.uniform() < 0.3 ? tags.erase(it) : std::next(it);
    }
    const auto relabel = Relabeling::random(inst.node_count(), inst.tag_count(), rng);
    const auto pinst = relabel.apply(inst);
    const auto pstate = relabel.apply(state);
    CHECK(pinst.tag_count() == inst.tag_count());
    CHECK(pstate.remaining_count() == state.remaining_count());
    Matrix p(static_cast<std::size_t>(inst.node_count()), 3);
    for (float& v : p.data()) v = static_cast<float>(rng.uniform());
    const auto pred = decode_slot(pinst, pstate, p);
    if (!std::holds_alternative<Timeslot>(pred)) continue;
    const auto back = relabel.map_back(std::get<Timeslot>(pred));
    // The same per-slot checks on the original ids.
    CHECK_FALSE(back.interrogations.empty());
    for (std::size_t v = 0; v < back.roles.size(); ++v) {
      if (back.roles[v] != Role::kInterrogate) continue;
      const NodeId node = NodeId::from_index(v);
      REQUIRE(back.interrogations.contains(node));
      CHECK(state.remaining[v].contains(back.interrogations.at(node)));
      const auto& nb = inst.adjacency()[v];
      CHECK(std::count_if(nb.begin(), nb.end(), [&](int u) {
              return back.roles[static_cast<std::size_t>(u)] == Role::kCarrier;
            }) == 1);
    }
  }
}

TEST_CASE("schedule_gnn with random weights always returns a valid schedule") {
  const auto bundle = random_bundle(testing::small_hyper(), 21);
  for (std::uint64_t s = 0; s < 40; ++s) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(s % 12);
    cfg.t = 1 + static_cast<int>(s % 18);
    cfg.seed = mix_seed(s);
    const auto inst = generate_random_geometric(cfg);
    FailSafePolicy policy;
    policy.rng_seed = s;
    policy.max_retries = 4;
    const auto r = schedule_gnn(inst, bundle, policy);
    CHECK(validate(inst, r.schedule, false).ok);
    CHECK(r.schedule.length() <= inst.tag_count());
    CHECK(r.stats.predicted_slots + r.stats.fallback_slots == r.schedule.length());
  }
}

TEST_CASE("schedule_gnn: accepted predictions, fallback, abort") {
  const auto rule = host_rule_bundle();
  const auto a = schedule_gnn(path3(), rule);
  CHECK(a.schedule == schedule(3, {slot("TCT", {{1, 1}, {3, 2}})}));
  CHECK(a.stats.retries_used == 0);
  CHECK_FALSE(a.stats.fallback_used);

  // Two carriers reach the star center under every relabeling.
  const auto b = schedule_gnn(star(), rule);
  CHECK(b.stats.fallback_used);
  CHECK(b.stats.retries_used == 32);
  CHECK(validate(star(), b.schedule, false).ok);

  FailSafePolicy abort;
  abort.fallback = Fallback::kAbort;
  abort.max_retries = 3;
  try {
    schedule_gnn(star(), rule, abort);
    FAIL("expected Abort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAbort);
  }
  FailSafePolicy negative;
  negative.max_retries = -1;
  CHECK_THROWS_AS(schedule_gnn(star(), rule, negative), Error);

  const auto empty = make(2, {{1, 2}}, {});
  const auto e = schedule_gnn(empty, rule);
  CHECK(e.schedule.slots.empty());
  CHECK(e.schedule.n == 2);
}

TEST_CASE("schedule_gnn is deterministic per seed") {
  const auto bundle = random_bundle(testing::small_hyper(), 22);
  GeneratorConfig cfg;
  cfg.n = 12;
  cfg.t = 20;
  cfg.seed = 8;
  const auto inst = generate_random_geometric(cfg);
  FailSafePolicy p;
  p.rng_seed = 99;
  const auto x = schedule_gnn(inst, bundle, p);
  const auto y = schedule_gnn(inst, bundle, p);
  CHECK(x.schedule == y.schedule);
  CHECK(x.stats.retries_used == y.stats.retries_used);
}

TEST_CASE("s_corr") {
  const std::vector<ProblemInstance> clean{minimal(), path3()};
  CHECK(s_corr(clean, host_rule_bundle()) == 1.0);
  CHECK(s_corr(clean, all_off_bundle()) == 0.0);
  const std::vector<ProblemInstance> mixed{minimal(), star()};
  CHECK(s_corr(mixed, host_rule_bundle()) == 0.5);
  FailSafePolicy abort;
  abort.fallback = Fallback::kAbort;
  CHECK(s_corr(mixed, host_rule_bundle(), abort) == 0.5);
  try {
    s_corr(std::vector<ProblemInstance>{}, host_rule_bundle());
    FAIL("expected EmptyDataset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyDataset);
  }
}

TEST_CASE("wilson interval") {
  const auto p = wilson_interval(8, 10);
  CHECK(p.value == doctest::Approx(0.8));
  CHECK(p.lower == doctest::Approx(0.49016).epsilon(1e-4));
  CHECK(p.upper == doctest::Approx(0.94332).epsilon(1e-4));
  CHECK(wilson_interval(0, 10).lower == 0.0);
  CHECK(wilson_interval(10, 10).upper == doctest::Approx(1.0));
  CHECK_THROWS_AS(wilson_interval(1, 0), Error);
}

TEST_CASE("replay samples") {
  const auto inst = minimal();
  const auto samples = replay_samples(inst, solve_optimal(inst).schedule);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].features.data() == std::vector<float>{1, 1, 1, 0, 2, 0});
  CHECK(samples[0].labels == std::vector<Role>{Role::kInterrogate, Role::kCarrier});

  const auto s = replay_samples(star(), solve_optimal(star()).schedule);
  REQUIRE(s.size() == 2);
  CHECK(s[0].features(0, 0) == 2);
  CHECK(s[1].features(0, 0) == 1);
  CHECK_THROWS_AS(replay_samples(inst, schedule(2, {})), Error);
}
