// SPDX-License-Identifier: Apache-2.0

#include "apfree/progressions.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace apfree {

namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;

constexpr u64 kDenseLimit = 20'000'000;

// Elements of a field set in chunked form, one row per element.
class Packed {
 public:
  Packed(const FieldSpace& space, std::span<const u64> elems, i64 factor = 1)
      : width_(space.chunk_count()), data_(elems.size() * width_) {
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const u64 v = factor == 1 ? elems[i] : space.int_mul(factor, elems[i]);
      space.split(v, data_.data() + i * width_);
    }
  }
  const u64* operator[](std::size_t i) const noexcept { return data_.data() + i * width_; }

 private:
  std::size_t width_;
  std::vector<u64> data_;
};

u64 sum_blocks(const std::vector<u64>& parts) { return std::accumulate(parts.begin(), parts.end(), u64{0}); }

APCounts finish(const GroundSet& set, int k, u64 ordered) {
  return APCounts{k, ordered, ordered / progression_multiplicity(set, k)};
}

u64 interval_N(const GroundSet& set) { return std::get<Interval>(set.ambient()).N; }

}  // namespace

std::uint64_t progression_multiplicity(const GroundSet& set, int k) {
  const auto* space = set.space();
  if (space == nullptr) return 2;
  if (k == 3 && space->characteristic() == 3) return 6;
  if (k == 4 && space->characteristic() == 5) return 4;
  return 2;
}

void require_progressions(const GroundSet& set, int k) {
  require(k == 3 || k == 4, ErrorKind::InvalidArgument, "only 3- and 4-term progressions are supported");
  if (const auto* space = set.space()) space->require_progressions(k);
}

APCounts count_3aps_direct(const GroundSet& set, const Exec& exec) {
  require_progressions(set, 3);
  const auto members = set.members();
  const std::size_t n = members.size();
  if (set.is_interval()) {
    const auto N = static_cast<i64>(interval_N(set));
    auto parts = parallel_blocks<u64>(n, exec.threads, [&](std::size_t begin, std::size_t end) {
      u64 count = 0;
      for (std::size_t j = begin; j < end; ++j) {
        const auto b = static_cast<i64>(members[j]);
        // a must satisfy 1 <= 2b - a <= N
        const auto lo = static_cast<u64>(std::max<i64>(1, 2 * b - N));
        const auto hi = static_cast<u64>(2 * b - 1);
        auto it = std::lower_bound(members.begin(), members.end(), lo);
        for (; it != members.end() && *it <= hi; ++it) {
          const auto a = static_cast<i64>(*it);
          if (a != b && set.contains(static_cast<u64>(2 * b - a))) ++count;
        }
      }
      return count;
    });
    return finish(set, 3, sum_blocks(parts));
  }
  const auto& space = *set.space();
  const Packed elems(space, members);
  const Packed doubled(space, members, 2);
  auto parts = parallel_blocks<u64>(n, exec.threads, [&](std::size_t begin, std::size_t end) {
    u64 count = 0;
    for (std::size_t j = begin; j < end; ++j) {
      const u64* twice_b = doubled[j];
      for (std::size_t i = 0; i < n; ++i) {
        if (i != j && set.contains(space.sub_split(twice_b, elems[i]))) ++count;
      }
    }
    return count;
  });
  return finish(set, 3, sum_blocks(parts));
}

// ordered = sum_{b in A} r_A(2b) - |A|, where r_A is expanded through the
// complement B = U \ A so only pairs of B are iterated:
//   Z:      r_A(s) = w(s) - 2 #{a in B : s-N <= a <= s-1} + r_B(s)
//   F_q^n:  r_A(s) = |U| - 2|B| + r_B(s)
APCounts count_3aps_via_complement(const GroundSet& set, const Exec& exec) {
  require_progressions(set, 3);
  const u64 universe = set.universe_size();
  if (universe > kDenseLimit) return count_3aps_direct(set, exec);
  const GroundSet comp = set.complement();
  const auto outside = comp.members();
  const auto members = set.members();

  if (set.is_interval()) {
    const auto N = static_cast<i64>(interval_N(set));
    std::vector<u64> rep(2 * static_cast<std::size_t>(N) + 1, 0);
    for (const u64 a : outside) {
      for (const u64 b : outside) ++rep[a + b];
    }
    i64 total = 0;
    for (const u64 bu : members) {
      const auto b = static_cast<i64>(bu);
      const i64 lo = std::max<i64>(1, 2 * b - N);
      const i64 hi = std::min<i64>(N, 2 * b - 1);
      const i64 window = hi - lo + 1;
      const auto first = std::lower_bound(outside.begin(), outside.end(), static_cast<u64>(lo));
      const auto last = std::upper_bound(outside.begin(), outside.end(), static_cast<u64>(hi));
      const i64 in_window = last - first;
      total += window - 2 * in_window + static_cast<i64>(rep[2 * bu]);
    }
    total -= static_cast<i64>(members.size());
    return finish(set, 3, static_cast<u64>(total));
  }

  const auto& space = *set.space();
  const Packed elems(space, outside);
  auto parts = parallel_blocks<std::vector<std::uint32_t>>(
      outside.size(), exec.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> rep(universe, 0);
        for (std::size_t i = begin; i < end; ++i) {
          for (std::size_t j = 0; j < outside.size(); ++j) ++rep[space.add_split(elems[i], elems[j])];
        }
        return rep;
      });
  std::vector<std::uint32_t>& rep = parts[0];
  for (std::size_t b = 1; b < parts.size(); ++b) {
    for (u64 s = 0; s < universe; ++s) rep[s] += parts[b][s];
  }
  const auto base = static_cast<i64>(universe) - 2 * static_cast<i64>(outside.size());
  i64 total = 0;
  for (const u64 b : members) total += base + static_cast<i64>(rep[space.int_mul(2, b)]);
  total -= static_cast<i64>(members.size());
  return finish(set, 3, static_cast<u64>(total));
}

APCounts count_3aps(const GroundSet& set, const Exec& exec) {
  require_progressions(set, 3);
  const u64 outside = set.universe_size() - set.size();
  if (set.universe_size() <= kDenseLimit && outside < set.size()) return count_3aps_via_complement(set, exec);
  return count_3aps_direct(set, exec);
}

APCounts count_4aps(const GroundSet& set, const Exec& exec) {
  require_progressions(set, 4);
  const auto members = set.members();
  const std::size_t n = members.size();
  if (set.is_interval()) {
    const u64 N = interval_N(set);
    auto parts = parallel_blocks<u64>(n, exec.threads, [&](std::size_t begin, std::size_t end) {
      u64 count = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const u64 a = members[i];
        for (std::size_t j = i + 1; j < n; ++j) {
          const u64 d = members[j] - a;
          if (a + 3 * d > N) break;
          if (set.contains(a + 2 * d) && set.contains(a + 3 * d)) ++count;
        }
      }
      return count;
    });
    return finish(set, 4, 2 * sum_blocks(parts));
  }
  const auto& space = *set.space();
  const Packed elems(space, members);
  const Packed doubled(space, members, 2);
  const Packed tripled(space, members, 3);
  auto parts = parallel_blocks<u64>(n, exec.threads, [&](std::size_t begin, std::size_t end) {
    u64 count = 0;
    for (std::size_t j = begin; j < end; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        // (x, d) = (a, b - a): third term 2b - a, fourth term 3b - 2a
        if (!set.contains(space.sub_split(doubled[j], elems[i]))) continue;
        if (set.contains(space.sub_split(tripled[j], doubled[i]))) ++count;
      }
    }
    return count;
  });
  return finish(set, 4, sum_blocks(parts));
}

APCounts count_kaps(const GroundSet& set, int k, const Exec& exec) {
  require_progressions(set, k);
  return k == 3 ? count_3aps(set, exec) : count_4aps(set, exec);
}

std::uint64_t count_triangles(const GroundSet& X, const GroundSet& Y, const GroundSet& Z) {
  require(X.space() != nullptr && X.same_ambient(Y) && X.same_ambient(Z), ErrorKind::AmbientMismatch,
          "triangles need three subsets of one F_q^n");
  const auto& space = *X.space();
  const Packed negx(space, X.members(), -1);
  const Packed ys(space, Y.members());
  u64 count = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = 0; j < Y.size(); ++j) {
      if (Z.contains(space.sub_split(negx[i], ys[j]))) ++count;
    }
  }
  return count;
}

GroundSet dilate(const GroundSet& set, std::int64_t c) {
  require(set.space() != nullptr, ErrorKind::AmbientMismatch, "dilation is defined on F_q^n sets");
  std::vector<u64> out;
  out.reserve(set.size());
  for (const u64 a : set.members()) out.push_back(set.space()->int_mul(c, a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return set.with_members(std::move(out));
}

ProgressionList list_progressions(const GroundSet& set, int k, std::uint64_t limit) {
  require_progressions(set, k);
  const APCounts counts = count_kaps(set, k);
  require(counts.unordered_nontrivial <= limit, ErrorKind::SizeLimit,
          std::to_string(counts.unordered_nontrivial) + " progressions exceed the limit of " +
              std::to_string(limit));
  const auto members = set.members();
  const std::size_t n = members.size();
  std::vector<std::array<std::uint32_t, 4>> found;
  found.reserve(counts.unordered_nontrivial);
  auto pos = [&](u64 x) { return static_cast<std::uint32_t>(*set.position(x)); };

  if (set.is_interval()) {
    const u64 N = interval_N(set);
    for (std::size_t i = 0; i < n; ++i) {
      const u64 a = members[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        const u64 d = members[j] - a;
        if (a + (static_cast<u64>(k) - 1) * d > N) break;
        if (!set.contains(a + 2 * d)) continue;
        if (k == 3) {
          found.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), pos(a + 2 * d), 0});
        } else if (set.contains(a + 3 * d)) {
          found.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), pos(a + 2 * d),
                           pos(a + 3 * d)});
        }
      }
    }
  } else {
    const auto& space = *set.space();
    const Packed elems(space, members);
    const Packed doubled(space, members, 2);
    const Packed tripled(space, members, 3);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const u64 third = space.sub_split(doubled[j], elems[i]);
        if (!set.contains(third)) continue;
        std::array<std::uint32_t, 4> t{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), pos(third), 0};
        if (k == 3) {
          if (t[0] > t[2]) continue;  // (x, d) and (x + 2d, -d) give the same set
          std::sort(t.begin(), t.begin() + 3);
        } else {
          const u64 fourth = space.sub_split(tripled[j], doubled[i]);
          if (!set.contains(fourth)) continue;
          t[3] = pos(fourth);
          if (t[0] > t[3]) continue;
          std::sort(t.begin(), t.end());
        }
        found.push_back(t);
      }
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  ProgressionList out;
  out.k = k;
  out.flat.reserve(found.size() * static_cast<std::size_t>(k));
  for (const auto& t : found) out.flat.insert(out.flat.end(), t.begin(), t.begin() + k);
  require(out.size() == counts.unordered_nontrivial, ErrorKind::InvariantViolation,
          "progression listing disagrees with the counting kernel");
  return out;
}

APHypergraph build_hypergraph(const GroundSet& set, std::uint64_t edge_limit) {
  const ProgressionList list = list_progressions(set, 3, edge_limit);
  APHypergraph h;
  h.vertex_count = set.size();
  h.degree.assign(set.size(), 0);
  h.edges.reserve(list.size());
  for (std::size_t e = 0; e < list.size(); ++e) {
    const auto t = list[e];
    h.edges.push_back({t[0], t[1], t[2]});
    for (const auto v : t) ++h.degree[v];
  }
  h.d_numerator = 3 * static_cast<u64>(h.edges.size());
  h.d_denominator = std::max<u64>(1, set.size());
  // A triple spans at most one edge once edges are deduplicated as sets.
  h.delta3 = h.edges.empty() ? 0 : 1;

  // co-degree of {u, v}: distinct w in A \ {u, v} among 2v-u, 2u-v, (u+v)/2
  const auto members = set.members();
  auto codegree_interval = [&](u64 u, u64 v) {
    std::array<i64, 3> cand{2 * static_cast<i64>(v) - static_cast<i64>(u),
                            2 * static_cast<i64>(u) - static_cast<i64>(v), -1};
    if ((u + v) % 2 == 0) cand[2] = static_cast<i64>((u + v) / 2);
    unsigned c = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const i64 w = cand[i];
      if (w == static_cast<i64>(u) || w == static_cast<i64>(v) || !set.contains_int(w)) continue;
      if (std::find(cand.begin(), cand.begin() + static_cast<long>(i), w) != cand.begin() + static_cast<long>(i)) continue;
      ++c;
    }
    return c;
  };
  if (set.is_interval()) {
    for (const auto& e : h.edges) {
      for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
          h.delta2 = std::max(h.delta2, codegree_interval(members[e[a]], members[e[b]]));
        }
      }
    }
  } else if (!h.edges.empty()) {
    const auto& space = *set.space();
    const Packed elems(space, members);
    const Packed doubled(space, members, 2);
    const Packed halved(space, members, static_cast<i64>((space.characteristic() + 1) / 2));
    for (const auto& e : h.edges) {
      for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
          const std::size_t i = e[a];
          const std::size_t j = e[b];
          const std::array<u64, 3> cand{space.sub_split(doubled[j], elems[i]), space.sub_split(doubled[i], elems[j]),
                                        space.add_split(halved[i], halved[j])};
          unsigned c = 0;
          for (std::size_t x = 0; x < cand.size(); ++x) {
            const u64 w = cand[x];
            if (w == members[i] || w == members[j] || !set.contains(w)) continue;
            if (std::find(cand.begin(), cand.begin() + static_cast<long>(x), w) != cand.begin() + static_cast<long>(x)) continue;
            ++c;
          }
          h.delta2 = std::max(h.delta2, c);
        }
      }
    }
  }
  return h;
}

double delta_function(const APHypergraph& h, double tau) {
  require(!h.edges.empty(), ErrorKind::EmptyHypergraph, "Delta(H, tau) needs at least one edge");
  require(tau > 0.0 && tau < 1.0, ErrorKind::DomainError, "tau must lie in (0, 1)");
  const double d = h.d_avg();
  return 4.0 * h.delta2 / (d * tau) + 2.0 * h.delta3 / (d * tau * tau);
}

}  // namespace apfree
