#include "gantt/exact_solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <unordered_map>
#include <utility>

#include "gantt/error.hpp"
#include "gantt/greedy.hpp"
#include "gantt/oracle.hpp"

namespace gantt {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Largest number of tags one carrier can serve in a slot, for any node.
std::int64_t coverage_cap(const ProblemInstance& inst, std::span<const int> pending, bool per_host) {
  std::int64_t cap = 0;
  for (const auto& nbrs : inst.adjacency()) {
    std::int64_t c = 0;
    for (int h : nbrs) {
      const int r = pending[static_cast<std::size_t>(h)];
      c += per_host ? (r > 0 ? 1 : 0) : r;
    }
    cap = std::max(cap, c);
  }
  return cap;
}

// pending_lb: per-node lower bound on tags left after the current slot;
// cap: upper bound on coverage_cap over any reachable later state.
LowerBound bound_from(const ProblemInstance& inst, std::span<const int> pending_lb, std::int64_t cap,
                      const BoundOptions& options) {
  LowerBound lb;
  std::int64_t total = 0;
  for (int r : pending_lb) {
    total += r;
    lb.slots = std::max<std::int64_t>(lb.slots, r);
  }
  if (total == 0) return lb;
  lb.carrier_slots = ceil_div(total, std::max<std::int64_t>(cap, 1));
  if (options.slot_carrier_coupling) lb.carrier_slots = std::max(lb.carrier_slots, lb.slots);
  lb.total = static_cast<std::int64_t>(inst.tag_count()) * lb.carrier_slots + lb.slots;
  return lb;
}

struct BudgetHit {};

// Cost-to-go of one pending state. Vectors are indexed by tag; entries of
// tags outside the state are -1 so states compare element-wise.
struct Entry {
  bool solved = false;
  bool seeded = false;  // root only: still holds the greedy incumbent
  std::int64_t objective = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int8_t> slot_rel;  // 0-based slot offset of each tag
  std::vector<std::int8_t> carrier;   // 1-based carrier node per tag
  std::vector<std::pair<int, int>> first_slot;  // (host, carrier) node indices
};

bool key_less(std::int64_t obj_a, const std::vector<std::int8_t>& s_a, const std::vector<std::int8_t>& c_a,
              const Entry& b) {
  if (obj_a != b.objective) return obj_a < b.objective;
  if (s_a != b.slot_rel) return s_a < b.slot_rel;
  return c_a < b.carrier;
}

class Solver {
 public:
  Solver(const ProblemInstance& inst, const SolverBudget& budget)
      : inst_(inst),
        budget_(budget),
        n_(inst.node_count()),
        tags_(inst.tag_count()),
        start_(std::chrono::steady_clock::now()) {
    stride_.assign(static_cast<std::size_t>(n_), 0);
    std::uint64_t stride = 1;
    overflow_ = false;
    for (int v = 0; v < n_; ++v) {
      const auto cap = inst_.hosted()[static_cast<std::size_t>(v)].size();
      if (cap == 0) continue;
      stride_[static_cast<std::size_t>(v)] = stride;
      if (stride > std::numeric_limits<std::uint64_t>::max() / (cap + 1)) overflow_ = true;
      stride *= cap + 1;
    }
  }

  SolveResult run() {
    SolveResult out;
    Schedule incumbent = solve_greedy(inst_);
    std::stable_sort(incumbent.slots.begin(), incumbent.slots.end(), [](const Timeslot& a, const Timeslot& b) {
      return min_tag(a) < min_tag(b);
    });
    incumbent_ = incumbent;
    const ScheduleKey key = schedule_key(inst_, incumbent);
    stats_.incumbent_history.push_back(key.objective);

    std::vector<int> pending(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) {
      pending[static_cast<std::size_t>(v)] = static_cast<int>(inst_.hosted()[static_cast<std::size_t>(v)].size());
    }

    if (!overflow_) {
      Entry& root = memo_[encode(pending)];
      root.seeded = true;
      root.objective = key.objective;
      root.slot_rel.resize(key.slot_of_tag.size());
      root.carrier.resize(key.carrier_of_tag.size());
      for (std::size_t t = 0; t < key.slot_of_tag.size(); ++t) {
        root.slot_rel[t] = static_cast<std::int8_t>(key.slot_of_tag[t] - 1);
        root.carrier[t] = static_cast<std::int8_t>(key.carrier_of_tag[t]);
      }
      try {
        root_code_ = encode(pending);
        solve(pending);
        stats_.proved_optimal = true;
      } catch (const BudgetHit&) {
        stats_.proved_optimal = false;
      }
    }

    out.schedule = incumbent_;
    stats_.wall_seconds = elapsed();
    out.stats = stats_;
    return out;
  }

 private:
  static int min_tag(const Timeslot& slot) {
    int m = std::numeric_limits<int>::max();
    for (const auto& [node, tag] : slot.interrogations) m = std::min(m, tag.value());
    return m;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void tick() {
    ++stats_.search_nodes_expanded;
    if (stats_.search_nodes_expanded > budget_.max_search_nodes) throw BudgetHit{};
    if ((stats_.search_nodes_expanded & 0xfff) == 0 && elapsed() > budget_.max_wall_seconds) throw BudgetHit{};
  }

  std::uint64_t encode(std::span<const int> pending) const {
    std::uint64_t code = 0;
    for (int v = 0; v < n_; ++v) {
      code += stride_[static_cast<std::size_t>(v)] * static_cast<std::uint64_t>(pending[static_cast<std::size_t>(v)]);
    }
    return code;
  }

  int lowest_pending(int host, std::span<const int> pending) const {
    const auto& h = inst_.hosted()[static_cast<std::size_t>(host)];
    return h[h.size() - static_cast<std::size_t>(pending[static_cast<std::size_t>(host)])];
  }

  // Per-slot search context; one per recursion level.
  struct Slot {
    std::vector<int> pending;
    std::vector<int> order;  // hosts with pending tags, by lowest pending tag
    std::vector<Role> role;
    std::vector<int> carrier_nbrs;
    std::vector<int> interrogating_nbrs;
    std::vector<int> carrier_of;
    std::vector<int> included;
    std::int64_t carriers = 0;
    std::int64_t cap = 0;
    bool is_root = false;
    std::uint64_t code = 0;
  };

  const Entry& solve(const std::vector<int>& pending) {
    const std::uint64_t code = encode(pending);
    {
      Entry& e = memo_[code];
      if (e.solved) return e;
    }

    Slot s;
    s.pending = pending;
    s.code = code;
    s.is_root = code == root_code_;
    for (int v = 0; v < n_; ++v) {
      if (pending[static_cast<std::size_t>(v)] > 0) s.order.push_back(v);
    }
    if (s.order.empty()) {
      Entry& e = memo_[code];
      e.solved = true;
      e.objective = 0;
      e.slot_rel.assign(static_cast<std::size_t>(tags_), -1);
      e.carrier.assign(static_cast<std::size_t>(tags_), -1);
      return e;
    }
    std::sort(s.order.begin(), s.order.end(),
              [&](int a, int b) { return lowest_pending(a, pending) < lowest_pending(b, pending); });
    const auto un = static_cast<std::size_t>(n_);
    s.role.assign(un, Role::kOff);
    s.carrier_nbrs.assign(un, 0);
    s.interrogating_nbrs.assign(un, 0);
    s.carrier_of.assign(un, -1);
    s.cap = coverage_cap(inst_, pending, true);

    search(s, 0);

    Entry& e = memo_[code];
    e.solved = true;
    ++stats_.states_solved;
    return e;
  }

  void search(Slot& s, std::size_t pos) {
    tick();
    if (pos == s.order.size()) {
      evaluate(s);
      return;
    }
    if (!partial_bound_ok(s, pos)) {
      ++stats_.prunes_by_bound;
      return;
    }
    const int h = s.order[pos];
    const auto uh = static_cast<std::size_t>(h);
    const auto& adj = inst_.adjacency();

    if (s.role[uh] == Role::kOff && s.carrier_nbrs[uh] <= 1) {
      if (s.carrier_nbrs[uh] == 1) {
        int carrier = -1;
        for (int u : adj[uh]) {
          if (s.role[static_cast<std::size_t>(u)] == Role::kCarrier) carrier = u;
        }
        interrogate(s, h, carrier, +1);
        search(s, pos + 1);
        interrogate(s, h, carrier, -1);
      } else {
        for (int c : adj[uh]) {
          const auto uc = static_cast<std::size_t>(c);
          if (s.role[uc] != Role::kOff || s.interrogating_nbrs[uc] != 0) continue;
          set_carrier(s, c, +1);
          interrogate(s, h, c, +1);
          search(s, pos + 1);
          interrogate(s, h, c, -1);
          set_carrier(s, c, -1);
        }
      }
    }
    // The host of the lowest pending tag is never deferred.
    if (pos > 0) search(s, pos + 1);
  }

  void set_carrier(Slot& s, int c, int delta) {
    const auto uc = static_cast<std::size_t>(c);
    s.role[uc] = delta > 0 ? Role::kCarrier : Role::kOff;
    for (int u : inst_.adjacency()[uc]) s.carrier_nbrs[static_cast<std::size_t>(u)] += delta;
    s.carriers += delta;
  }

  void interrogate(Slot& s, int h, int carrier, int delta) {
    const auto uh = static_cast<std::size_t>(h);
    s.role[uh] = delta > 0 ? Role::kInterrogate : Role::kOff;
    for (int u : inst_.adjacency()[uh]) s.interrogating_nbrs[static_cast<std::size_t>(u)] += delta;
    if (delta > 0) {
      s.carrier_of[uh] = carrier;
      s.included.push_back(h);
    } else {
      s.carrier_of[uh] = -1;
      s.included.pop_back();
    }
  }

  const Entry& current(const Slot& s) { return memo_[s.code]; }

  // Bound with every undecided host optimistically served in this slot.
  bool partial_bound_ok(const Slot& s, std::size_t pos) {
    const Entry& best = current(s);
    if (best.objective == std::numeric_limits<std::int64_t>::max()) return true;
    std::vector<int> lb = s.pending;
    for (int h : s.included) --lb[static_cast<std::size_t>(h)];
    for (std::size_t i = pos; i < s.order.size(); ++i) {
      const auto uh = static_cast<std::size_t>(s.order[i]);
      if (s.role[uh] == Role::kOff && s.carrier_nbrs[uh] <= 1) --lb[uh];
    }
    const LowerBound rest = bound_from(inst_, lb, s.cap, {});
    const std::int64_t k = static_cast<std::int64_t>(tags_) * s.carriers + 1;
    return k + rest.total <= best.objective;
  }

  void evaluate(Slot& s) {
    std::vector<int> next = s.pending;
    for (int h : s.included) --next[static_cast<std::size_t>(h)];
    const std::int64_t k = static_cast<std::int64_t>(tags_) * s.carriers + 1;
    const auto ut = static_cast<std::size_t>(tags_);

    {
      const Entry& best = current(s);
      if (best.objective != std::numeric_limits<std::int64_t>::max()) {
        const LowerBound rest = bound_from(inst_, next, coverage_cap(inst_, next, true), {});
        if (k + rest.total > best.objective) {
          ++stats_.prunes_by_bound;
          return;
        }
        if (k + rest.total == best.objective) {
          // Tags served now get offset 0; everything else is at least 1.
          std::vector<std::int8_t> s_lb(ut, -1);
          for (int v = 0; v < n_; ++v) {
            const auto& hosted = inst_.hosted()[static_cast<std::size_t>(v)];
            const int r = s.pending[static_cast<std::size_t>(v)];
            for (std::size_t i = hosted.size() - static_cast<std::size_t>(r); i < hosted.size(); ++i) {
              s_lb[static_cast<std::size_t>(hosted[i])] = 1;
            }
          }
          for (int h : s.included) s_lb[static_cast<std::size_t>(lowest_pending(h, s.pending))] = 0;
          if (s_lb > best.slot_rel) {
            ++stats_.prunes_by_bound;
            return;
          }
        }
      }
    }

    // Copy out of this level's context before recursing.
    const std::vector<int> included = s.included;
    std::vector<std::pair<int, int>> slot_config;
    for (int h : included) slot_config.emplace_back(h, s.carrier_of[static_cast<std::size_t>(h)]);

    const Entry& child = solve(next);
    const std::int64_t obj = k + child.objective;
    std::vector<std::int8_t> slot_rel(ut, -1);
    std::vector<std::int8_t> carrier(ut, -1);
    for (std::size_t t = 0; t < ut; ++t) {
      if (child.slot_rel[t] >= 0) {
        slot_rel[t] = static_cast<std::int8_t>(child.slot_rel[t] + 1);
        carrier[t] = child.carrier[t];
      }
    }
    for (auto [h, c] : slot_config) {
      const auto t = static_cast<std::size_t>(lowest_pending(h, s.pending));
      slot_rel[t] = 0;
      carrier[t] = static_cast<std::int8_t>(c + 1);
    }

    Entry& best = memo_[s.code];
    if (!key_less(obj, slot_rel, carrier, best)) return;
    best.objective = obj;
    best.slot_rel = std::move(slot_rel);
    best.carrier = std::move(carrier);
    best.first_slot = std::move(slot_config);
    best.seeded = false;
    if (s.is_root) {
      incumbent_ = reconstruct(s.pending);
      stats_.incumbent_history.push_back(obj);
    }
  }

  Schedule reconstruct(std::vector<int> pending) {
    Schedule sched;
    sched.n = n_;
    for (;;) {
      const Entry& e = memo_[encode(pending)];
      if (e.first_slot.empty()) break;
      Timeslot slot = make_slot(n_);
      for (auto [h, c] : e.first_slot) {
        slot.roles[static_cast<std::size_t>(h)] = Role::kInterrogate;
        slot.roles[static_cast<std::size_t>(c)] = Role::kCarrier;
        slot.interrogations[NodeId::from_index(static_cast<std::size_t>(h))] =
            TagId(lowest_pending(h, pending) + 1);
      }
      for (auto [h, c] : e.first_slot) --pending[static_cast<std::size_t>(h)];
      sched.slots.push_back(std::move(slot));
    }
    return sched;
  }

  const ProblemInstance& inst_;
  SolverBudget budget_;
  const int n_;
  const int tags_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::uint64_t> stride_;
  bool overflow_ = false;
  std::uint64_t root_code_ = 0;
  std::unordered_map<std::uint64_t, Entry> memo_;
  Schedule incumbent_;
  SolveStats stats_;
};

}  // namespace

LowerBound lower_bound(const ProblemInstance& inst, const PartialState& state, const BoundOptions& options) {
  if (state.pending_per_node.size() != static_cast<std::size_t>(inst.node_count())) {
    throw Error(ErrorCode::kDimensionMismatch, "pending counts must be indexed by node");
  }
  const std::int64_t cap = coverage_cap(inst, state.pending_per_node, options.per_host_coverage);
  LowerBound lb = bound_from(inst, state.pending_per_node, cap, options);
  lb.total += state.objective_so_far;
  return lb;
}

SolveResult solve_optimal(const ProblemInstance& inst, const SolverBudget& budget) {
  if (!(budget.max_wall_seconds > 0) || budget.max_search_nodes <= 0) {
    throw Error(ErrorCode::kBadConfig, "solver budget must be positive");
  }
  return Solver(inst, budget).run();
}

}  // namespace gantt
