#include <cmath>
#include <set>
#include <string>

#include "doctest.h"
#include "gantt/error.hpp"
#include "gantt/instance.hpp"
#include "support.hpp"

using namespace gantt;
using gantt::testing::make;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kAbort;
}

}  // namespace

TEST_CASE("minimal instance") {
  const auto inst = testing::minimal();
  CHECK(inst.node_count() == 2);
  CHECK(inst.tag_count() == 1);
  CHECK(inst.host_of(TagId(1)) == NodeId(1));
  CHECK(inst.edges().size() == 1);
}

TEST_CASE("construction errors") {
  CHECK(code_of([] { make(3, {{1, 2}}, {{1, 3}}); }) == ErrorCode::kDisconnectedGraph);
  CHECK(code_of([] { make(2, {{1, 1}}, {{1, 1}}); }) == ErrorCode::kSelfLoop);
  CHECK(code_of([] { make(2, {{1, 2}, {2, 1}}, {{1, 1}}); }) == ErrorCode::kDuplicateEdge);
  CHECK(code_of([] { make(2, {{1, 2}}, {{1, 3}}); }) == ErrorCode::kBadHost);
  CHECK(code_of([] { make(2, {{1, 2}}, {{2, 1}}); }) == ErrorCode::kBadTagIds);
  CHECK(code_of([] { make(2, {{1, 3}}, {{1, 1}}); }) == ErrorCode::kBadNodeId);
  CHECK(code_of([] { make(1, {}, {{1, 1}}); }) == ErrorCode::kBadNodeCount);
}

TEST_CASE("edges are normalized and sorted") {
  const auto inst = make(3, {{3, 2}, {2, 1}}, {{1, 1}});
  REQUIRE(inst.edges().size() == 2);
  CHECK(inst.edges()[0] == Edge{NodeId(1), NodeId(2)});
  CHECK(inst.edges()[1] == Edge{NodeId(2), NodeId(3)});
}

TEST_CASE("neighbors") {
  const auto path = make(3, {{1, 2}, {2, 3}}, {{1, 1}});
  CHECK(path.neighbors(NodeId(2)) == std::set<NodeId>{NodeId(1), NodeId(3)});
  CHECK(path.neighbors(NodeId(1)) == std::set<NodeId>{NodeId(2)});
  CHECK(code_of([&] { path.neighbors(NodeId(4)); }) == ErrorCode::kBadNodeId);

  const auto k4 = make(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}, {{1, 1}});
  for (int v = 1; v <= 4; ++v) {
    const auto nb = k4.neighbors(NodeId(v));
    CHECK(nb.size() == 3);
    CHECK_FALSE(nb.contains(NodeId(v)));
    for (NodeId u : nb) CHECK(k4.neighbors(u).contains(NodeId(v)));
  }
}

TEST_CASE("canonical JSON") {
  CHECK(serialize_instance(testing::minimal()) == R"({"n":2,"edges":[[1,2]],"tags":{"1":1}})");
  // Keys sort numerically, not as strings.
  std::map<int, int> tags;
  for (int t = 1; t <= 11; ++t) tags[t] = 1 + t % 2;
  const auto text = serialize_instance(make(2, {{1, 2}}, tags));
  CHECK(text.find(R"("9":2,"10":1,"11":2)") != std::string::npos);
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_instance("{\"n\":2,"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_instance(R"({"edges":[[1,2]],"tags":{"1":1}})"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_instance(R"({"n":2,"edges":[[1]],"tags":{"1":1}})"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_instance(R"({"n":2,"edges":[[1,2]],"tags":{"x":1}})"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_instance(R"({"n":3,"edges":[[1,2]],"tags":{"1":1}})"); }) ==
        ErrorCode::kDisconnectedGraph);
}

TEST_CASE("generator: two nodes force the single edge") {
  GeneratorConfig cfg;
  cfg.n = 2;
  cfg.t = 3;
  cfg.seed = 7;
  const auto inst = generate_random_geometric(cfg);
  REQUIRE(inst.edges().size() == 1);
  CHECK(inst.edges()[0] == Edge{NodeId(1), NodeId(2)});
}

TEST_CASE("generator: determinism and validity") {
  GeneratorConfig cfg;
  cfg.seed = 12345;
  const auto a = generate_random_geometric(cfg);
  const auto b = generate_random_geometric(cfg);
  CHECK(serialize_instance(a) == serialize_instance(b));
  CHECK(a.tag_count() == 14);
  CHECK(a.node_count() == 10);
  CHECK(parse_instance(serialize_instance(a)) == a);

  cfg.dimensions = 3;
  const auto c = generate_random_geometric(cfg);
  CHECK(c.node_count() == 10);
}

TEST_CASE("generator: bad config and budget") {
  GeneratorConfig cfg;
  cfg.n = 1;
  CHECK(code_of([&] { generate_random_geometric(cfg); }) == ErrorCode::kBadConfig);
  cfg = {};
  cfg.radius = -1;
  CHECK(code_of([&] { generate_random_geometric(cfg); }) == ErrorCode::kBadConfig);
  cfg = {};
  cfg.n = 50;
  cfg.radius = 0.01;
  cfg.max_attempts = 5;
  CHECK(code_of([&] { generate_random_geometric(cfg); }) == ErrorCode::kGenerationBudgetExceeded);
}

TEST_CASE("generator: round trip over 1000 instances") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(s % 9);
    cfg.t = 1 + static_cast<int>(s % 14);
    cfg.seed = mix_seed(s);
    const auto inst = generate_random_geometric(cfg);
    const auto text = serialize_instance(inst);
    const auto back = parse_instance(text);
    REQUIRE(back == inst);
    REQUIRE(serialize_instance(back) == text);
  }
}

TEST_CASE("generator: mean degree is stable under constant density") {
  std::vector<double> means;
  for (int n : {40, 80, 160}) {
    double total = 0.0;
    const int samples = 200;
    for (int s = 0; s < samples; ++s) {
      GeneratorConfig cfg;
      cfg.n = n;
      cfg.t = 1;
      cfg.seed = mix_seed(static_cast<std::uint64_t>(n * 1000 + s));
      const auto inst = generate_random_geometric(cfg);
      total += 2.0 * static_cast<double>(inst.edges().size()) / n;
    }
    means.push_back(total / samples);
    MESSAGE("n=" << n << " mean degree " << means.back());
  }
  for (double m : means) CHECK(std::abs(m - means.back()) <= 0.2 * means.back());
}
