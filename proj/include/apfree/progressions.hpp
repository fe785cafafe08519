// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "apfree/ground_set.hpp"
#include "apfree/parallel.hpp"

namespace apfree {

/// Nontrivial k-AP counts of a set.
///
/// `ordered_nontrivial` counts pairs (x, d), d != 0, whose whole progression
/// lies in the set; `unordered_nontrivial` counts distinct element sets.
struct APCounts {
  int k = 3;
  std::uint64_t ordered_nontrivial = 0;
  std::uint64_t unordered_nontrivial = 0;
};

/// Number of (x, d) parametrizations of one k-AP element set in the ambient
/// of `set`: 2 in Z; for F_q^n with characteristic p it is 6 for k = 3,
/// p = 3 (a whole line) and 4 for k = 4, p = 5 (a line minus one point);
/// 2 otherwise.
std::uint64_t progression_multiplicity(const GroundSet& set, int k);

/// Throws CharTooSmall when the ambient cannot host distinct k-APs.
void require_progressions(const GroundSet& set, int k);

APCounts count_3aps(const GroundSet& set, const Exec& exec = {});
APCounts count_4aps(const GroundSet& set, const Exec& exec = {});
APCounts count_kaps(const GroundSet& set, int k, const Exec& exec = {});

/// Pair-iteration kernel over the set itself, whatever its density.
APCounts count_3aps_direct(const GroundSet& set, const Exec& exec = {});
/// Kernel that iterates pairs of the complement (fast for dense sets).
/// Falls back to the direct kernel where the complement form is unavailable.
APCounts count_3aps_via_complement(const GroundSet& set, const Exec& exec = {});

[[nodiscard]] inline bool is_kap_free(const GroundSet& set, int k) {
  return count_kaps(set, k).unordered_nontrivial == 0;
}

/// Number of (x, y, z) in X x Y x Z with x + y + z = 0.
std::uint64_t count_triangles(const GroundSet& X, const GroundSet& Y, const GroundSet& Z);

/// {c * a : a in A} for an integer c (field ambients only).
GroundSet dilate(const GroundSet& set, std::int64_t c);

/// Unordered nontrivial k-APs as sorted member-position tuples, in
/// lexicographic order.
struct ProgressionList {
  int k = 3;
  std::vector<std::uint32_t> flat;

  [[nodiscard]] std::size_t size() const noexcept { return flat.size() / static_cast<std::size_t>(k); }
  [[nodiscard]] std::span<const std::uint32_t> operator[](std::size_t i) const noexcept {
    return {flat.data() + i * static_cast<std::size_t>(k), static_cast<std::size_t>(k)};
  }
};

ProgressionList list_progressions(const GroundSet& set, int k,
                                  std::uint64_t limit = std::uint64_t{100'000'000});

/// The 3-uniform hypergraph H(A) of nontrivial 3-APs.
struct APHypergraph {
  std::size_t vertex_count = 0;
  std::vector<std::array<std::uint32_t, 3>> edges;
  std::vector<std::uint32_t> degree;
  std::uint64_t d_numerator = 0;    // 3|E|
  std::uint64_t d_denominator = 1;  // |V|
  unsigned delta2 = 0;
  unsigned delta3 = 0;

  [[nodiscard]] double d_avg() const noexcept {
    return static_cast<double>(d_numerator) / static_cast<double>(d_denominator);
  }
};

/// Fails with SizeLimit when the exact 3-AP count exceeds edge_limit.
APHypergraph build_hypergraph(const GroundSet& set, std::uint64_t edge_limit = std::uint64_t{100'000'000});

/// Delta(H, tau) = 4*Delta2/(d*tau) + 2*Delta3/(d*tau^2).
double delta_function(const APHypergraph& h, double tau);

}  // namespace apfree
