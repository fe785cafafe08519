// SPDX-License-Identifier: Apache-2.0

#include "apfree/ground_set.hpp"

#include <algorithm>
#include <numeric>

namespace apfree {

namespace {

std::uint64_t universe_of(const Ambient& ambient) {
  if (const auto* iv = std::get_if<Interval>(&ambient)) return iv->N;
  return std::get<FieldSpace>(ambient).size();
}

}  // namespace

GroundSet::GroundSet(Ambient ambient, std::vector<std::uint64_t> members)
    : ambient_(std::move(ambient)), universe_(universe_of(ambient_)), members_(std::move(members)) {
  require(universe_ <= kMaxUniverse, ErrorKind::SizeLimit,
          "universe of " + std::to_string(universe_) + " elements exceeds the bitmap limit");
  std::sort(members_.begin(), members_.end());
  require(std::adjacent_find(members_.begin(), members_.end()) == members_.end(),
          ErrorKind::InvalidArgument, "duplicate members");
  bits_.assign((universe_ + 63) / 64, 0);
  const bool iv = is_interval();
  for (const auto m : members_) {
    const std::uint64_t slot = iv ? m - 1 : m;
    if ((iv && m == 0) || slot >= universe_) {
      fail(ErrorKind::InvalidArgument, "member " + std::to_string(m) + " outside " + ambient_label());
    }
    bits_[slot >> 6] |= std::uint64_t{1} << (slot & 63);
  }
}

GroundSet GroundSet::full(const Ambient& ambient) {
  const std::uint64_t u = universe_of(ambient);
  require(u <= kMaxUniverse, ErrorKind::SizeLimit, "universe too large");
  std::vector<std::uint64_t> all(u);
  std::iota(all.begin(), all.end(), std::holds_alternative<Interval>(ambient) ? 1 : 0);
  return GroundSet(ambient, std::move(all));
}

std::uint64_t GroundSet::universe_size() const noexcept { return universe_; }

std::optional<std::size_t> GroundSet::position(std::uint64_t x) const noexcept {
  const auto it = std::lower_bound(members_.begin(), members_.end(), x);
  if (it == members_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

GroundSet GroundSet::subset(std::span<const std::size_t> positions) const {
  std::vector<std::uint64_t> out;
  out.reserve(positions.size());
  for (const auto i : positions) {
    require(i < members_.size(), ErrorKind::InvalidArgument, "position out of range");
    out.push_back(members_[i]);
  }
  return GroundSet(ambient_, std::move(out));
}

GroundSet GroundSet::without(std::uint64_t x) const {
  std::vector<std::uint64_t> out;
  out.reserve(members_.size());
  for (const auto m : members_) {
    if (m != x) out.push_back(m);
  }
  return GroundSet(ambient_, std::move(out));
}

GroundSet GroundSet::complement() const {
  std::vector<std::uint64_t> out;
  out.reserve(universe_ - members_.size());
  const std::uint64_t offset = is_interval() ? 1 : 0;
  for (std::uint64_t slot = 0; slot < universe_; ++slot) {
    if (((bits_[slot >> 6] >> (slot & 63)) & 1U) == 0) out.push_back(slot + offset);
  }
  return GroundSet(ambient_, std::move(out));
}

bool GroundSet::same_ambient(const GroundSet& other) const noexcept {
  return ambient_ == other.ambient_;
}

std::string GroundSet::ambient_label() const {
  if (const auto* iv = std::get_if<Interval>(&ambient_)) return "[1.." + std::to_string(iv->N) + "]";
  const auto& s = std::get<FieldSpace>(ambient_);
  return "F_" + std::to_string(s.q()) + "^" + std::to_string(s.dim());
}

}  // namespace apfree
