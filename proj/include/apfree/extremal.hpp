// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "apfree/ground_set.hpp"

namespace apfree {

enum class ExtremalMode { Exact, Oracle, Heuristic };
std::string to_string(ExtremalMode mode);

struct ExtremalResult {
  ExtremalMode mode = ExtremalMode::Exact;
  int k = 3;
  std::size_t size = 0;
  GroundSet witness = GroundSet::interval(0, {});
  bool optimal = false;
  bool budget_exhausted = false;
  std::uint64_t nodes_explored = 0;
};

inline constexpr std::size_t kOracleMaxSize = 25;
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Subsets in decreasing popcount; the first k-AP-free one wins.
ExtremalResult fk_oracle(const GroundSet& set, int k);

enum class TieBreak { Smallest, Largest };

/// Maximum independent set of the k-AP hypergraph by branch-and-bound.
/// On budget exhaustion the incumbent is returned with optimal = false.
ExtremalResult fk_exact(const GroundSet& set, int k, std::uint64_t budget = kDefaultBudget,
                        TieBreak tie = TieBreak::Smallest);

/// `iters` restarts of random-order greedy insertion, each followed by
/// (1,2)-swap local search. Deterministic in (set, k, iters, seed).
ExtremalResult fk_heuristic(const GroundSet& set, int k, std::uint64_t iters, std::uint64_t seed);

/// |A| - f_k(A); throws BudgetExhausted when the exact search is cut short.
std::size_t min_deletion(const GroundSet& set, int k, std::uint64_t budget = kDefaultBudget);

/// Exhaustive re-count on the witness, independent of the search.
void certify_witness(const GroundSet& input, const ExtremalResult& result);

}  // namespace apfree
