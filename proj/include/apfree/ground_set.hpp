// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "apfree/fq_space.hpp"

namespace apfree {

/// The integers {1, ..., N}.
struct Interval {
  std::uint64_t N;
  friend bool operator==(const Interval&, const Interval&) = default;
};

using Ambient = std::variant<Interval, FieldSpace>;

/// A finite subset of [1..N] or of F_q^n. Members are kept sorted and
/// mirrored in a membership bitmap over the whole universe, so universes
/// are capped at kMaxUniverse elements.
class GroundSet {
 public:
  static constexpr std::uint64_t kMaxUniverse = std::uint64_t{1} << 31;

  GroundSet(Ambient ambient, std::vector<std::uint64_t> members);

  static GroundSet full(const Ambient& ambient);
  static GroundSet interval(std::uint64_t N, std::vector<std::uint64_t> members) {
    return GroundSet(Interval{N}, std::move(members));
  }

  [[nodiscard]] const Ambient& ambient() const noexcept { return ambient_; }
  [[nodiscard]] bool is_interval() const noexcept { return std::holds_alternative<Interval>(ambient_); }
  [[nodiscard]] const FieldSpace* space() const noexcept { return std::get_if<FieldSpace>(&ambient_); }
  [[nodiscard]] std::uint64_t universe_size() const noexcept;

  [[nodiscard]] std::span<const std::uint64_t> members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
  [[nodiscard]] std::uint64_t operator[](std::size_t i) const noexcept { return members_[i]; }

  /// Membership of an ambient element (an integer for intervals, an index for fields).
  [[nodiscard]] bool contains(std::uint64_t x) const noexcept {
    const std::uint64_t slot = is_interval() ? x - 1 : x;
    if (slot >= universe_) return false;
    return ((bits_[slot >> 6] >> (slot & 63)) & 1U) != 0;
  }
  /// Same as contains() for a signed candidate (interval arithmetic).
  [[nodiscard]] bool contains_int(std::int64_t x) const noexcept {
    return x >= 1 && contains(static_cast<std::uint64_t>(x));
  }

  [[nodiscard]] std::optional<std::size_t> position(std::uint64_t x) const noexcept;

  /// Subset by member positions (any order, no duplicates).
  [[nodiscard]] GroundSet subset(std::span<const std::size_t> positions) const;
  [[nodiscard]] GroundSet with_members(std::vector<std::uint64_t> members) const {
    return GroundSet(ambient_, std::move(members));
  }
  [[nodiscard]] GroundSet without(std::uint64_t x) const;
  /// Elements of the universe not in this set.
  [[nodiscard]] GroundSet complement() const;

  [[nodiscard]] bool same_ambient(const GroundSet& other) const noexcept;
  [[nodiscard]] std::string ambient_label() const;

  friend bool operator==(const GroundSet& a, const GroundSet& b) noexcept {
    return a.same_ambient(b) && a.members_ == b.members_;
  }

 private:
  Ambient ambient_;
  std::uint64_t universe_ = 0;
  std::vector<std::uint64_t> members_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace apfree
