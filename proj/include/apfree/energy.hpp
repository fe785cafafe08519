// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "apfree/ground_set.hpp"
#include "apfree/parallel.hpp"

namespace apfree {

using u128 = unsigned __int128;

std::string to_decimal(u128 v);

/// Additive energy of A and the three-term count T(A) in the convention
/// T(A) = sum_{b in A} r_{A+A}(2b): ordered pairs (x, y) with x + y = 2b,
/// x = y included.
struct EnergyProfile {
  std::size_t set_size = 0;
  std::uint64_t energy = 0;
  /// (s, r_{A+A}(s)) for every s with r > 0, ascending in s. Sums are
  /// integers for interval ambients and element indices for fields.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rep_counts;
  std::uint64_t t_ordered = 0;
  /// Unordered nontrivial 3-APs (0 in characteristic 2).
  std::uint64_t t_nontrivial_unordered = 0;
};

/// Sizes beyond this would let |A|^3 overflow 64 bits.
inline constexpr std::size_t kMaxEnergySetSize = std::size_t{1} << 21;

EnergyProfile energy_profile(const GroundSet& set, const Exec& exec = {});

/// E(A) through difference counts, sum_d r_{A-A}(d)^2; independent of the
/// sum-based accumulation in energy_profile.
std::uint64_t energy_by_differences(const GroundSet& set);

struct CauchySchwarzReport {
  u128 lhs = 0;  // T(A)^2
  u128 rhs = 0;  // |A| * E(A)
  double slack_ratio = 0.0;  // lhs / rhs
};

CauchySchwarzReport cauchy_schwarz_report(const EnergyProfile& profile);
CauchySchwarzReport cauchy_schwarz_report(const GroundSet& set);

/// Empirical eps in E(A) = |A|^(2 + eps): log E / log |A| - 2.
double energy_exponent(const EnergyProfile& profile);
double energy_exponent_report(const GroundSet& set);

}  // namespace apfree
