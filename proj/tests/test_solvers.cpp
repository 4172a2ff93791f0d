#include <algorithm>
#include <numeric>
#include <span>
#include <string>

#include "doctest.h"
#include "gantt/error.hpp"
#include "gantt/exact_solver.hpp"
#include "gantt/greedy.hpp"
#include "gantt/oracle.hpp"
#include "support.hpp"

using namespace gantt;
using namespace gantt::testing;

namespace {

// Same graph, with `counts[v]` fresh tags on node v.
ProblemInstance with_counts(const ProblemInstance& inst, const std::vector<int>& counts) {
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : inst.edges()) edges.emplace_back(u.value(), v.value());
  std::map<int, int> tags;
  int next = 1;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    for (int k = 0; k < counts[v]; ++k) tags[next++] = static_cast<int>(v) + 1;
  }
  return ProblemInstance::create(inst.node_count(), edges, tags);
}

}  // namespace

TEST_CASE("oracle examples") {
  const auto m = enumerate_optimal(minimal());
  CHECK(m.best_objective == 2);
  CHECK(m.optima.size() == 1);
  CHECK(enumerate_optimal(path3()).best_objective == 3);

  const auto s = enumerate_optimal(star());
  CHECK(s.best_objective == 6);
  CHECK(s.optima.size() > 1);

  CHECK(lexicographic_canonical(star()) == schedule(3, {slot("TCO", {{1, 1}}), slot("TCO", {{1, 2}})}));
  const auto pair = lexicographic_canonical(mutual_pair());
  CHECK(pair == schedule(2, {slot("TC", {{1, 1}}), slot("CT", {{2, 2}})}));
  CHECK(schedule_key(mutual_pair(), pair).slot_of_tag == std::vector<int>{1, 2});
  CHECK(enumerate_optimal(mutual_pair()).best_objective == 6);
}

TEST_CASE("oracle limits") {
  OracleLimits tight;
  tight.max_nodes = 2;
  CHECK_THROWS_AS(enumerate_optimal(path3(), tight), Error);
  OracleLimits short_slots;
  short_slots.max_slots = 1;
  try {
    lexicographic_canonical(star(), short_slots);
    FAIL("expected LimitsExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLimitsExceeded);
  }
  OracleLimits capped;
  capped.max_optima = 1;
  const auto r = enumerate_optimal(star(), capped);
  CHECK(r.overflow);
  CHECK(r.optima.size() == 1);
}

TEST_CASE("oracle: canonical is an optimum and unique optima are canonical") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_small(rng, 2 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)));
    const auto all = enumerate_optimal(inst);
    const auto canon = lexicographic_canonical(inst);
    CHECK(std::find(all.optima.begin(), all.optima.end(), canon) != all.optima.end());
    if (all.optima.size() == 1) CHECK(all.optima.front() == canon);
    for (const auto& opt : all.optima) {
      REQUIRE(validate(inst, opt, false).ok);
      CHECK(schedule_key(inst, canon) <= schedule_key(inst, opt));
    }
  }
}

TEST_CASE("oracle: objective is invariant under relabeling") {
  Rng rng(43);
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const int t = 1 + static_cast<int>(rng.below(3));
    const auto inst = random_small(rng, n, t);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(std::span(perm));
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : inst.edges()) edges.emplace_back(perm[u.index()], perm[v.index()]);
    std::vector<int> tperm(static_cast<std::size_t>(t));
    std::iota(tperm.begin(), tperm.end(), 1);
    rng.shuffle(std::span(tperm));
    std::map<int, int> tags;
    for (int k = 0; k < t; ++k) tags[tperm[static_cast<std::size_t>(k)]] = perm[static_cast<std::size_t>(inst.host_index()[static_cast<std::size_t>(k)])];
    const auto other = ProblemInstance::create(n, edges, tags);
    CHECK(enumerate_optimal(inst).best_objective == enumerate_optimal(other).best_objective);
  }
}

TEST_CASE("exact solver: small examples") {
  const auto r = solve_optimal(minimal());
  CHECK(r.stats.proved_optimal);
  CHECK(metrics(minimal(), r.schedule).objective == 2);
  CHECK(solve_optimal(star()).schedule == lexicographic_canonical(star()));
  CHECK(solve_optimal(mutual_pair()).schedule == lexicographic_canonical(mutual_pair()));
  CHECK(metrics(path3(), solve_optimal(path3()).schedule).objective == 3);
}

TEST_CASE("exact solver: bad budget") {
  SolverBudget b;
  b.max_wall_seconds = 0;
  try {
    solve_optimal(minimal(), b);
    FAIL("expected BadConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBadConfig);
  }
}

TEST_CASE("exact solver: matches the oracle at N<=5, T<=4") {
  Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    const auto inst = random_small(rng, 2 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(4)));
    const auto r = solve_optimal(inst);
    REQUIRE(r.stats.proved_optimal);
    REQUIRE(validate(inst, r.schedule, false).ok);
    CHECK(r.schedule == lexicographic_canonical(inst));
  }
}

TEST_CASE("exact solver: anytime history and training-scale instance") {
  GeneratorConfig cfg;
  cfg.n = 10;
  cfg.t = 14;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    cfg.seed = seed;
    const auto inst = generate_random_geometric(cfg);
    const auto r = solve_optimal(inst);
    CHECK(r.stats.proved_optimal);
    const auto& h = r.stats.incumbent_history;
    REQUIRE_FALSE(h.empty());
    CHECK(std::is_sorted(h.rbegin(), h.rend()));
    const auto m = metrics(inst, r.schedule);
    CHECK(m.objective == h.back());
    CHECK(m.objective <= metrics(inst, solve_greedy(inst)).objective);
    MESSAGE("seed " << seed << " objective " << m.objective << " nodes " << r.stats.search_nodes_expanded
                    << " " << r.stats.wall_seconds << " s");
  }
}

TEST_CASE("exact solver: budget exhaustion keeps a valid incumbent") {
  GeneratorConfig cfg;
  cfg.n = 10;
  cfg.t = 14;
  cfg.seed = 9;
  const auto inst = generate_random_geometric(cfg);
  SolverBudget b;
  b.max_search_nodes = 1;
  const auto r = solve_optimal(inst, b);
  CHECK_FALSE(r.stats.proved_optimal);
  CHECK(validate(inst, r.schedule, false).ok);
}

TEST_CASE("lower bound examples") {
  const PartialState fresh{{2, 0, 0}, 0};
  BoundOptions literal;
  literal.per_host_coverage = false;
  literal.slot_carrier_coupling = false;
  const auto lit = lower_bound(star(), fresh, literal);
  CHECK(lit.carrier_slots == 1);
  CHECK(lit.slots == 2);
  CHECK(lit.total == 4);
  const auto tight = lower_bound(star(), fresh);
  CHECK(tight.total == 6);
  CHECK(lower_bound(star(), PartialState{{0, 0, 0}, 11}).total == 11);
  CHECK(lower_bound(star(), PartialState{{0, 0, 0}, 11}, literal).total == 11);
}

TEST_CASE("lower bound is admissible") {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const auto inst = random_small(rng, 2 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(4)));
    std::vector<int> pending(static_cast<std::size_t>(inst.node_count()));
    int total = 0;
    for (std::size_t v = 0; v < pending.size(); ++v) {
      const int hosted = static_cast<int>(inst.hosted()[v].size());
      pending[v] = static_cast<int>(rng.below(static_cast<std::uint64_t>(hosted + 1)));
      total += pending[v];
    }
    if (total == 0) continue;
    // Completion cost is scored with the full instance's T.
    const auto sub = with_counts(inst, pending);
    const auto opt = metrics(sub, lexicographic_canonical(sub));
    const std::int64_t completion = inst.tag_count() * opt.carriers + opt.length;
    for (bool cov : {false, true}) {
      for (bool couple : {false, true}) {
        const auto lb = lower_bound(inst, PartialState{pending, 0}, BoundOptions{cov, couple});
        CHECK(lb.total <= completion);
      }
    }
  }
}

TEST_CASE("greedy examples") {
  CHECK(solve_greedy(path3()) == schedule(3, {slot("TCT", {{1, 1}, {3, 2}})}));
  CHECK(solve_greedy(minimal()) == schedule(2, {slot("TC", {{1, 1}})}));
  CHECK(tie_break_from_string("lowest_node_id") == TieBreak::kLowestNodeId);
  CHECK(tie_break_from_string("highest_degree_then_id") == TieBreak::kHighestDegreeThenId);
  CHECK_THROWS_AS(tie_break_from_string("random"), Error);
}

TEST_CASE("greedy: strict validity, termination, determinism") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(s % 30);
    cfg.t = 1 + static_cast<int>(s % 40);
    cfg.seed = mix_seed(s + 1000);
    const auto inst = generate_random_geometric(cfg);
    for (auto tb : {TieBreak::kLowestNodeId, TieBreak::kHighestDegreeThenId}) {
      const auto a = solve_greedy(inst, {tb});
      REQUIRE(validate(inst, a, true).ok);
      CHECK(a.length() <= inst.tag_count());
      CHECK(solve_greedy(inst, {tb}) == a);
    }
  }
}

TEST_CASE("greedy never beats the oracle at N<=4, T<=3") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = random_small(rng, 2 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)));
    CHECK(metrics(inst, solve_greedy(inst)).objective >= enumerate_optimal(inst).best_objective);
  }
}

TEST_CASE("greedy misses carrier reuse on the triangle fixture") {
  const auto inst = reuse_miss();
  const auto g = metrics(inst, solve_greedy(inst));
  const auto o = metrics(inst, solve_optimal(inst).schedule);
  CHECK(g == ScheduleMetrics{3, 3, 15});
  CHECK(o == ScheduleMetrics{2, 2, 10});
  CHECK(o.objective == enumerate_optimal(inst).best_objective);
}

TEST_CASE("greedy_complete handles partial pending sets") {
  const auto inst = star();
  std::vector<std::set<TagId>> pending(3);
  pending[0] = {TagId(2)};
  const auto slots = greedy_complete(inst, pending);
  REQUIRE(slots.size() == 1);
  CHECK(slots[0].interrogations.at(NodeId(1)) == TagId(2));
  CHECK_THROWS_AS(greedy_complete(inst, std::vector<std::set<TagId>>(2)), Error);
}
