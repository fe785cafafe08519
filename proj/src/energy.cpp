// SPDX-License-Identifier: Apache-2.0

#include "apfree/energy.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "apfree/progressions.hpp"

namespace apfree {

namespace {

using u64 = std::uint64_t;

constexpr u64 kDenseRange = 20'000'000;

void check_size(const GroundSet& set) {
  require(set.size() <= kMaxEnergySetSize, ErrorKind::Overflow,
          "energy of a set with " + std::to_string(set.size()) + " elements may exceed 64 bits");
}

// Sums a+b keyed by a dense slot, or by a hash map when the range is large.
template <class SlotOf>
std::vector<std::pair<u64, u64>> tally(std::span<const u64> members, u64 range, SlotOf slot_of,
                                       const Exec& exec) {
  std::vector<std::pair<u64, u64>> out;
  const std::size_t n = members.size();
  if (range <= kDenseRange) {
    auto parts = parallel_blocks<std::vector<std::uint32_t>>(n, exec.threads, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint32_t> rep(range, 0);
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = 0; j < n; ++j) ++rep[slot_of(i, j)];
      }
      return rep;
    });
    auto& rep = parts[0];
    for (std::size_t b = 1; b < parts.size(); ++b) {
      for (u64 s = 0; s < range; ++s) rep[s] += parts[b][s];
    }
    for (u64 s = 0; s < range; ++s) {
      if (rep[s] != 0) out.emplace_back(s, rep[s]);
    }
    return out;
  }
  std::unordered_map<u64, u64> rep;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ++rep[slot_of(i, j)];
  }
  out.assign(rep.begin(), rep.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> split_all(const FieldSpace& space, std::span<const u64> elems) {
  std::vector<u64> data(elems.size() * space.chunk_count());
  for (std::size_t i = 0; i < elems.size(); ++i) space.split(elems[i], data.data() + i * space.chunk_count());
  return data;
}

}  // namespace

std::string to_decimal(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

EnergyProfile energy_profile(const GroundSet& set, const Exec& exec) {
  check_size(set);
  EnergyProfile prof;
  prof.set_size = set.size();
  const auto members = set.members();
  if (set.is_interval()) {
    const u64 N = std::get<Interval>(set.ambient()).N;
    // a + b ranges over [2, 2N]; slot = a + b
    prof.rep_counts = tally(members, 2 * N + 1, [&](std::size_t i, std::size_t j) { return members[i] + members[j]; }, exec);
  } else {
    const auto& space = *set.space();
    const auto packed = split_all(space, members);
    const unsigned w = space.chunk_count();
    prof.rep_counts = tally(members, space.size(), [&](std::size_t i, std::size_t j) {
      return space.add_split(packed.data() + i * w, packed.data() + j * w);
    }, exec);
  }
  for (const auto& [s, r] : prof.rep_counts) prof.energy += r * r;

  auto rep_at = [&](u64 s) -> u64 {
    const auto it = std::lower_bound(prof.rep_counts.begin(), prof.rep_counts.end(), std::pair<u64, u64>{s, 0});
    return it != prof.rep_counts.end() && it->first == s ? it->second : 0;
  };
  for (const u64 b : members) prof.t_ordered += rep_at(set.is_interval() ? 2 * b : set.space()->int_mul(2, b));

  const bool has_3aps = set.is_interval() || set.space()->characteristic() >= 3;
  if (has_3aps) prof.t_nontrivial_unordered = count_3aps(set, exec).unordered_nontrivial;
  return prof;
}

std::uint64_t energy_by_differences(const GroundSet& set) {
  check_size(set);
  const auto members = set.members();
  const std::size_t n = members.size();
  std::unordered_map<u64, u64> rep;
  if (set.is_interval() && 2 * std::get<Interval>(set.ambient()).N + 1 <= kDenseRange) {
    const u64 N = std::get<Interval>(set.ambient()).N;
    std::vector<u64> dense(2 * N + 1, 0);  // slot = a - b + N
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ++dense[members[i] + N - members[j]];
    }
    u64 e = 0;
    for (const u64 r : dense) e += r * r;
    return e;
  }
  if (set.is_interval()) {
    const u64 N = std::get<Interval>(set.ambient()).N;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ++rep[members[i] + N - members[j]];
    }
  } else {
    const auto& space = *set.space();
    const auto packed = split_all(space, members);
    const unsigned w = space.chunk_count();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ++rep[space.sub_split(packed.data() + i * w, packed.data() + j * w)];
    }
  }
  u64 e = 0;
  for (const auto& [d, r] : rep) e += r * r;
  return e;
}

CauchySchwarzReport cauchy_schwarz_report(const EnergyProfile& profile) {
  CauchySchwarzReport rep;
  rep.lhs = static_cast<u128>(profile.t_ordered) * profile.t_ordered;
  rep.rhs = static_cast<u128>(profile.set_size) * profile.energy;
  rep.slack_ratio = rep.rhs == 0 ? 0.0 : static_cast<double>(rep.lhs) / static_cast<double>(rep.rhs);
  return rep;
}

CauchySchwarzReport cauchy_schwarz_report(const GroundSet& set) { return cauchy_schwarz_report(energy_profile(set)); }

double energy_exponent(const EnergyProfile& profile) {
  require(profile.set_size >= 2, ErrorKind::DomainError, "energy exponent needs |A| >= 2");
  return std::log(static_cast<double>(profile.energy)) / std::log(static_cast<double>(profile.set_size)) - 2.0;
}

double energy_exponent_report(const GroundSet& set) { return energy_exponent(energy_profile(set)); }

}  // namespace apfree
