// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "apfree/errors.hpp"
#include "apfree/extremal.hpp"
#include "apfree/progressions.hpp"
#include "oracles.hpp"

using namespace apfree;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an apfree::Error");
  return ErrorKind::InvariantViolation;
}

GroundSet range_set(std::uint64_t N) {
  std::vector<std::uint64_t> m;
  for (std::uint64_t i = 1; i <= N; ++i) m.push_back(i);
  return GroundSet::interval(N, m);
}

void check_witness(const GroundSet& A, const ExtremalResult& r, int k) {
  REQUIRE(r.witness.size() == r.size);
  REQUIRE(r.witness.same_ambient(A));
  for (const auto x : r.witness.members()) REQUIRE(A.contains(x));
  REQUIRE(oracle::progression_sets(r.witness, k).empty());
}

// Random subset of the base with exactly `size` members.
GroundSet random_of_size(const GroundSet& base, std::size_t size, RngStream& rng) {
  std::vector<std::uint64_t> pool(base.members().begin(), base.members().end());
  for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.bounded(pool.size() - i)]);
  pool.resize(size);
  return base.with_members(pool);
}

}  // namespace

TEST_CASE("fk_oracle examples") {
  const auto r9 = fk_oracle(range_set(9), 3);
  CHECK(r9.size == 5);
  CHECK(r9.optimal);
  CHECK(r9.mode == ExtremalMode::Oracle);
  check_witness(range_set(9), r9, 3);
  const auto free = GroundSet::interval(20, {1, 2, 4, 5, 10, 11, 13, 14});
  CHECK(fk_oracle(free, 3).size == 8);
  CHECK(fk_oracle(GroundSet::interval(3, {1, 2, 3}), 3).size == 2);
  CHECK(kind_of([] { (void)fk_oracle(range_set(26), 3); }) == ErrorKind::TooLarge);
  CHECK(fk_oracle(range_set(20), 4).size == oracle::max_free(range_set(20), 4));
}

TEST_CASE("fk_exact examples") {
  const auto f32 = GroundSet::full(FieldSpace::make(3, 2));
  const auto a = fk_exact(f32, 3);
  CHECK(a.size == 4);
  CHECK(a.optimal);
  CHECK(fk_oracle(f32, 3).size == 4);
  check_witness(f32, a, 3);

  const auto f33 = GroundSet::full(FieldSpace::make(3, 3));
  const auto b = fk_exact(f33, 3);
  const auto b2 = fk_exact(f33, 3, kDefaultBudget, TieBreak::Largest);
  CHECK(b.size == 9);
  CHECK(b2.size == 9);
  CHECK(b.optimal);
  CHECK(b2.optimal);
  check_witness(f33, b, 3);
  check_witness(f33, b2, 3);

  std::size_t prev = 0;
  for (std::uint64_t N = 1; N <= 20; ++N) {
    const auto r = fk_exact(range_set(N), 3);
    REQUIRE(r.optimal);
    REQUIRE(r.size >= prev);
    REQUIRE(r.size <= prev + 1);
    prev = r.size;
  }
  CHECK(prev == 9);
}

TEST_CASE("fk_exact reports exhaustion with a feasible incumbent") {
  const auto A = range_set(60);
  const auto r = fk_exact(A, 3, 50);
  CHECK_FALSE(r.optimal);
  CHECK(r.budget_exhausted);
  check_witness(A, r, 3);
  CHECK(kind_of([&] { (void)min_deletion(A, 3, 50); }) == ErrorKind::BudgetExhausted);
}

TEST_CASE("fk_heuristic examples") {
  const auto A = range_set(30);
  const auto exact = fk_exact(A, 3);
  CHECK(exact.size == 12);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto h = fk_heuristic(A, 3, 200, seed);
    CHECK_FALSE(h.optimal);
    CHECK(h.mode == ExtremalMode::Heuristic);
    check_witness(A, h, 3);
    CHECK(h.size <= exact.size);
    CHECK(h.size + 1 >= exact.size);
  }
  const auto h1 = fk_heuristic(A, 3, 50, 7);
  const auto h2 = fk_heuristic(A, 3, 50, 7);
  CHECK(h1.witness == h2.witness);
  CHECK(h1.nodes_explored == h2.nodes_explored);
}

TEST_CASE("min_deletion examples") {
  CHECK(min_deletion(GroundSet::interval(20, {1, 2, 4, 5, 10, 11, 13, 14}), 3) == 0);
  CHECK(min_deletion(GroundSet::interval(3, {1, 2, 3}), 3) == 1);
  CHECK(min_deletion(range_set(9), 3) == 4);
}

TEST_CASE("fk_exact equals fk_oracle on 300 random instances") {
  RngStream rng(424242);
  const std::vector<GroundSet> bases{range_set(40), GroundSet::full(FieldSpace::make(3, 3)),
                                     GroundSet::full(FieldSpace::make(5, 2))};
  int mismatches = 0;
  for (int t = 0; t < 300; ++t) {
    const auto& base = bases[static_cast<std::size_t>(t) % bases.size()];
    const auto A = random_of_size(base, 1 + rng.bounded(20), rng);
    const int k = (t % 7 == 6 && (base.is_interval() || base.space()->characteristic() >= 5)) ? 4 : 3;
    const auto e = fk_exact(A, k);
    const auto o = fk_oracle(A, k);
    mismatches += e.size == o.size ? 0 : 1;
    REQUIRE(e.optimal);
    check_witness(A, e, k);
    check_witness(A, o, k);
    REQUIRE(e.size == oracle::max_free(A, k));
    CHECK_NOTHROW(certify_witness(A, e));
  }
  CHECK(mismatches == 0);
}

TEST_CASE("subset monotonicity and one-element deletion") {
  RngStream rng(11);
  const auto base = range_set(40);
  for (int t = 0; t < 100; ++t) {
    const auto A = random_of_size(base, 10 + rng.bounded(21), rng);
    const auto sub = random_of_size(A, rng.bounded(A.size() + 1), rng);
    const auto fa = fk_exact(A, 3).size;
    REQUIRE(fk_exact(sub, 3).size <= fa);
    const auto fewer = fk_exact(A.without(A[rng.bounded(A.size())]), 3).size;
    REQUIRE(fewer <= fa);
    REQUIRE(fewer + 1 >= fa);
  }
}

TEST_CASE("certify_witness rejects bad witnesses") {
  const auto A = range_set(9);
  auto r = fk_exact(A, 3);
  r.witness = A;
  r.size = A.size();
  CHECK(kind_of([&] { certify_witness(A, r); }) == ErrorKind::InvariantViolation);
  auto s = fk_exact(A, 3);
  s.size = 4;
  CHECK(kind_of([&] { certify_witness(A, s); }) == ErrorKind::InvariantViolation);
}
