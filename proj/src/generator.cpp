#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gantt/error.hpp"
#include "gantt/instance.hpp"
#include "gantt/rng.hpp"

namespace gantt {

namespace {

using Point = std::array<double, 3>;

bool connected(const std::vector<std::vector<int>>& adjacency) {
  std::vector<char> seen(adjacency.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
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
  return reached == adjacency.size();
}

}  // namespace

ProblemInstance generate_random_geometric(const GeneratorConfig& cfg) {
  if (cfg.n < 2) throw Error(ErrorCode::kBadConfig, "n must be >= 2");
  if (cfg.t < 1) throw Error(ErrorCode::kBadConfig, "t must be >= 1");
  if (!(cfg.density > 0.0)) throw Error(ErrorCode::kBadConfig, "density must be > 0");
  if (!(cfg.radius > 0.0)) throw Error(ErrorCode::kBadConfig, "radius must be > 0");
  if (cfg.dimensions != 2 && cfg.dimensions != 3) throw Error(ErrorCode::kBadConfig, "dimensions must be 2 or 3");
  if (cfg.max_attempts < 1) throw Error(ErrorCode::kBadConfig, "max_attempts must be >= 1");

  Rng rng(cfg.seed);
  const auto n = static_cast<std::size_t>(cfg.n);
  const auto dims = static_cast<std::size_t>(cfg.dimensions);
  // Constant density: the placement region grows with n, the radius stays fixed.
  const double side = std::pow(static_cast<double>(cfg.n) / cfg.density, 1.0 / static_cast<double>(cfg.dimensions));
  const double r2 = cfg.radius * cfg.radius;

  std::vector<Point> points(n);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;

  for (int attempt = 0;; ++attempt) {
    if (attempt == cfg.max_attempts) {
      throw Error(ErrorCode::kGenerationBudgetExceeded,
                  "no connected placement after " + std::to_string(cfg.max_attempts) + " attempts");
    }
    for (auto& p : points) {
      p = {0.0, 0.0, 0.0};
      for (std::size_t d = 0; d < dims; ++d) p[d] = rng.uniform(0.0, side);
    }
    edges.clear();
    adjacency.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dist2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
          const double delta = points[i][d] - points[j][d];
          dist2 += delta * delta;
        }
        if (dist2 <= r2) {
          edges.emplace_back(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
          adjacency[i].push_back(static_cast<int>(j));
          adjacency[j].push_back(static_cast<int>(i));
        }
      }
    }
    if (connected(adjacency)) break;
  }

  std::map<int, int> tags;
  for (int t = 1; t <= cfg.t; ++t) tags[t] = static_cast<int>(rng.below(n)) + 1;
  return ProblemInstance::create(cfg.n, edges, tags);
}

}  // namespace gantt
