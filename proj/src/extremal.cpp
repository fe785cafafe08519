// SPDX-License-Identifier: Apache-2.0

#include "apfree/extremal.hpp"

#include <algorithm>
#include <numeric>

#include "apfree/errors.hpp"
#include "apfree/progressions.hpp"
#include "apfree/rng.hpp"

namespace apfree {

namespace {

using u64 = std::uint64_t;

struct Hypergraph {
  int k = 3;
  std::size_t n = 0;
  std::vector<std::uint32_t> flat;              // k vertices per edge
  std::vector<std::vector<std::uint32_t>> inc;  // edges per vertex

  [[nodiscard]] std::size_t edges() const { return flat.size() / static_cast<std::size_t>(k); }
  [[nodiscard]] const std::uint32_t* edge(std::size_t e) const { return flat.data() + e * static_cast<std::size_t>(k); }
};

Hypergraph hypergraph_of(const GroundSet& set, int k) {
  require(k == 3 || k == 4, ErrorKind::InvalidArgument, "k must be 3 or 4");
  require_progressions(set, k);
  Hypergraph h;
  h.k = k;
  h.n = set.size();
  h.flat = std::move(list_progressions(set, k).flat);
  h.inc.resize(h.n);
  for (std::size_t e = 0; e < h.edges(); ++e) {
    for (int i = 0; i < k; ++i) h.inc[h.edge(e)[i]].push_back(static_cast<std::uint32_t>(e));
  }
  return h;
}

GroundSet witness_from(const GroundSet& set, const std::vector<char>& in) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] != 0) pos.push_back(i);
  }
  return set.subset(pos);
}

enum : char { kUndecided = 0, kIn = 1, kOut = 2 };

class BranchAndBound {
 public:
  BranchAndBound(const Hypergraph& h, u64 budget, TieBreak tie)
      : h_(h), budget_(budget), tie_(tie), state_(h.n, kUndecided), best_in_(h.n, 0),
        used_(h.n, 0), live_degree_(h.n, 0) {}

  void run() {
    seed_incumbent();
    search();
  }

  [[nodiscard]] std::size_t best() const { return best_; }
  [[nodiscard]] const std::vector<char>& best_in() const { return best_in_; }
  [[nodiscard]] u64 nodes() const { return nodes_; }
  [[nodiscard]] bool exhausted() const { return exhausted_; }

 private:
  // Index-order greedy gives a non-trivial starting bound.
  void seed_incumbent() {
    std::vector<char> in(h_.n, 0);
    std::size_t size = 0;
    for (std::size_t v = 0; v < h_.n; ++v) {
      bool ok = true;
      for (const auto e : h_.inc[v]) {
        const auto* t = h_.edge(e);
        if (std::all_of(t, t + h_.k, [&](std::uint32_t w) { return w == v || in[w] != 0; })) {
          ok = false;
          break;
        }
      }
      if (ok) {
        in[v] = 1;
        ++size;
      }
    }
    best_ = size;
    best_in_ = in;
  }

  void set(std::uint32_t v, char s) {
    state_[v] = s;
    trail_.push_back(v);
    if (s == kIn) ++included_;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto v = trail_.back();
      trail_.pop_back();
      if (state_[v] == kIn) --included_;
      state_[v] = kUndecided;
    }
  }

  // Excludes every undecided vertex that would complete an edge.
  void propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t e = 0; e < h_.edges(); ++e) {
        const auto* t = h_.edge(e);
        int ins = 0;
        int outs = 0;
        std::uint32_t free_v = 0;
        for (int i = 0; i < h_.k; ++i) {
          const char s = state_[t[i]];
          if (s == kIn) {
            ++ins;
          } else if (s == kOut) {
            ++outs;
          } else {
            free_v = t[i];
          }
        }
        if (outs == 0 && ins == h_.k - 1) {
          set(free_v, kOut);
          changed = true;
        }
      }
    }
  }

  void search() {
    if (nodes_ >= budget_) {
      exhausted_ = true;
      return;
    }
    ++nodes_;
    const std::size_t mark = trail_.size();
    propagate();

    std::size_t undecided = 0;
    for (std::size_t v = 0; v < h_.n; ++v) {
      live_degree_[v] = 0;
      used_[v] = 0;
      if (state_[v] == kUndecided) ++undecided;
    }
    std::size_t live = 0;
    std::size_t packing = 0;
    // Disjoint undecided parts, smallest parts first.
    for (int want = 2; want <= h_.k; ++want) {
      for (std::size_t e = 0; e < h_.edges(); ++e) {
        const auto* t = h_.edge(e);
        int free_count = 0;
        bool dead = false;
        for (int i = 0; i < h_.k; ++i) {
          if (state_[t[i]] == kOut) dead = true;
          if (state_[t[i]] == kUndecided) ++free_count;
        }
        if (dead || free_count != want) continue;
        ++live;
        bool disjoint = true;
        for (int i = 0; i < h_.k; ++i) {
          if (state_[t[i]] == kUndecided) {
            ++live_degree_[t[i]];
            if (used_[t[i]] != 0) disjoint = false;
          }
        }
        if (disjoint) {
          ++packing;
          for (int i = 0; i < h_.k; ++i) {
            if (state_[t[i]] == kUndecided) used_[t[i]] = 1;
          }
        }
      }
    }

    const std::size_t bound = included_ + undecided - packing;
    if (bound <= best_) {
      undo(mark);
      return;
    }
    if (live == 0) {
      best_ = included_ + undecided;
      for (std::size_t v = 0; v < h_.n; ++v) best_in_[v] = state_[v] != kOut ? 1 : 0;
      undo(mark);
      return;
    }

    std::uint32_t pick = 0;
    std::uint32_t top = 0;
    for (std::size_t v = 0; v < h_.n; ++v) {
      if (state_[v] != kUndecided) continue;
      const auto deg = live_degree_[v];
      if (deg > top || (deg == top && deg > 0 && tie_ == TieBreak::Largest)) {
        top = deg;
        pick = static_cast<std::uint32_t>(v);
      }
    }
    const std::size_t branch_mark = trail_.size();
    set(pick, kIn);
    search();
    undo(branch_mark);
    if (!exhausted_) {
      set(pick, kOut);
      search();
    }
    undo(mark);
  }

  const Hypergraph& h_;
  u64 budget_;
  TieBreak tie_;
  std::vector<char> state_;
  std::vector<char> best_in_;
  std::vector<char> used_;
  std::vector<std::uint32_t> live_degree_;
  std::vector<std::uint32_t> trail_;
  std::size_t included_ = 0;
  std::size_t best_ = 0;
  u64 nodes_ = 0;
  bool exhausted_ = false;
};

bool completes_edge(const Hypergraph& h, const std::vector<char>& in, std::uint32_t v) {
  for (const auto e : h.inc[v]) {
    const auto* t = h.edge(e);
    if (std::all_of(t, t + h.k, [&](std::uint32_t w) { return w == v || in[w] != 0; })) return true;
  }
  return false;
}

// One improving (1,2)-swap; false when none exists.
bool swap_once(const Hypergraph& h, std::vector<char>& in, std::size_t& size) {
  std::vector<std::uint32_t> cand;
  for (std::uint32_t x = 0; x < h.n; ++x) {
    if (in[x] == 0) continue;
    in[x] = 0;
    cand.clear();
    for (std::uint32_t y = 0; y < h.n; ++y) {
      if (y != x && in[y] == 0 && !completes_edge(h, in, y)) cand.push_back(y);
    }
    for (std::size_t a = 0; a < cand.size(); ++a) {
      in[cand[a]] = 1;
      for (std::size_t b = a + 1; b < cand.size(); ++b) {
        if (!completes_edge(h, in, cand[b])) {
          in[cand[b]] = 1;
          ++size;
          return true;
        }
      }
      in[cand[a]] = 0;
    }
    in[x] = 1;
  }
  return false;
}

}  // namespace

std::string to_string(ExtremalMode mode) {
  switch (mode) {
    case ExtremalMode::Exact:
      return "exact";
    case ExtremalMode::Oracle:
      return "oracle";
    case ExtremalMode::Heuristic:
      return "heuristic";
  }
  return "unknown";
}

ExtremalResult fk_oracle(const GroundSet& set, int k) {
  require(set.size() <= kOracleMaxSize, ErrorKind::TooLarge,
          "oracle handles at most " + std::to_string(kOracleMaxSize) + " elements");
  const Hypergraph h = hypergraph_of(set, k);
  std::vector<std::uint32_t> masks;
  for (std::size_t e = 0; e < h.edges(); ++e) {
    std::uint32_t m = 0;
    for (int i = 0; i < k; ++i) m |= std::uint32_t{1} << h.edge(e)[i];
    masks.push_back(m);
  }
  const auto n = static_cast<unsigned>(set.size());
  ExtremalResult r;
  r.mode = ExtremalMode::Oracle;
  r.k = k;
  r.optimal = true;
  const u64 limit = u64{1} << n;
  for (unsigned pc = n + 1; pc-- > 0;) {
    // Gosper's hack over masks of popcount pc
    u64 m = pc == 0 ? 0 : (u64{1} << pc) - 1;
    while (m < limit) {
      ++r.nodes_explored;
      const auto mm = static_cast<std::uint32_t>(m);
      if (std::none_of(masks.begin(), masks.end(), [&](std::uint32_t e) { return (mm & e) == e; })) {
        std::vector<std::size_t> pos;
        for (unsigned i = 0; i < n; ++i) {
          if ((m >> i) & 1U) pos.push_back(i);
        }
        r.witness = set.subset(pos);
        r.size = pc;
        return r;
      }
      if (m == 0) break;
      const u64 c = m & (~m + 1);
      const u64 rr = m + c;
      m = (((rr ^ m) >> 2) / c) | rr;
    }
  }
  fail(ErrorKind::InvariantViolation, "oracle found no progression-free subset");
}

ExtremalResult fk_exact(const GroundSet& set, int k, std::uint64_t budget, TieBreak tie) {
  const Hypergraph h = hypergraph_of(set, k);
  BranchAndBound bb(h, budget, tie);
  bb.run();
  ExtremalResult r;
  r.mode = ExtremalMode::Exact;
  r.k = k;
  r.size = bb.best();
  r.witness = witness_from(set, bb.best_in());
  r.optimal = !bb.exhausted();
  r.budget_exhausted = bb.exhausted();
  r.nodes_explored = bb.nodes();
  return r;
}

ExtremalResult fk_heuristic(const GroundSet& set, int k, std::uint64_t iters, std::uint64_t seed) {
  require(iters >= 1, ErrorKind::InvalidArgument, "heuristic needs at least one iteration");
  const Hypergraph h = hypergraph_of(set, k);
  RngStream rng(seed, 3);
  std::vector<std::uint32_t> order(h.n);
  std::vector<char> in(h.n);
  std::vector<char> best(h.n, 0);
  std::size_t best_size = 0;
  bool have = false;
  ExtremalResult r;
  r.mode = ExtremalMode::Heuristic;
  r.k = k;
  for (u64 it = 0; it < iters; ++it) {
    std::iota(order.begin(), order.end(), 0U);
    for (std::size_t i = h.n; i > 1; --i) std::swap(order[i - 1], order[rng.bounded(i)]);
    std::fill(in.begin(), in.end(), 0);
    std::size_t size = 0;
    for (const auto v : order) {
      if (!completes_edge(h, in, v)) {
        in[v] = 1;
        ++size;
      }
    }
    while (swap_once(h, in, size)) {
      ++r.nodes_explored;
      for (std::uint32_t v = 0; v < h.n; ++v) {
        if (in[v] == 0 && !completes_edge(h, in, v)) {
          in[v] = 1;
          ++size;
        }
      }
    }
    if (!have || size > best_size) {
      best_size = size;
      best = in;
      have = true;
    }
  }
  r.size = best_size;
  r.witness = witness_from(set, best);
  return r;
}

std::size_t min_deletion(const GroundSet& set, int k, std::uint64_t budget) {
  const ExtremalResult r = fk_exact(set, k, budget);
  if (!r.optimal) {
    fail(ErrorKind::BudgetExhausted, "exact search stopped after " + std::to_string(r.nodes_explored) +
                                         " nodes with incumbent " + std::to_string(r.size));
  }
  return set.size() - r.size;
}

void certify_witness(const GroundSet& input, const ExtremalResult& result) {
  require(result.witness.size() == result.size, ErrorKind::InvariantViolation, "witness size mismatch");
  require(result.witness.same_ambient(input), ErrorKind::InvariantViolation, "witness ambient mismatch");
  for (const auto x : result.witness.members()) {
    require(input.contains(x), ErrorKind::InvariantViolation, "witness is not a subset of the input");
  }
  require(count_kaps(result.witness, result.k).unordered_nontrivial == 0, ErrorKind::InvariantViolation,
          "witness contains a progression");
}

}  // namespace apfree
