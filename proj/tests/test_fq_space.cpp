// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <vector>

#include "apfree/errors.hpp"
#include "apfree/fq_space.hpp"
#include "apfree/rng.hpp"
#include "oracles.hpp"

using apfree::ErrorKind;
using apfree::FieldSpace;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const apfree::Error& e) {
    return e.kind();
  }
  FAIL("expected an apfree::Error");
  return ErrorKind::InvariantViolation;
}

std::vector<std::uint64_t> poly_mulmod_brute(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                             std::uint64_t p) {
  std::vector<std::uint64_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

// true when some monic polynomial of degree 1..deg/2 divides f (brute force over products)
bool reducible_brute(const std::vector<std::uint64_t>& f, std::uint64_t p) {
  const unsigned e = static_cast<unsigned>(f.size() - 1);
  for (unsigned da = 1; da <= e / 2; ++da) {
    const unsigned db = e - da;
    std::uint64_t na = 1, nb = 1;
    for (unsigned i = 0; i < da; ++i) na *= p;
    for (unsigned i = 0; i < db; ++i) nb *= p;
    for (std::uint64_t ra = 0; ra < na; ++ra) {
      std::vector<std::uint64_t> a(da + 1, 0);
      for (unsigned i = 0, v = static_cast<unsigned>(ra); i < da; ++i, v /= static_cast<unsigned>(p)) a[i] = v % p;
      a[da] = 1;
      for (std::uint64_t rb = 0; rb < nb; ++rb) {
        std::vector<std::uint64_t> b(db + 1, 0);
        for (unsigned i = 0, v = static_cast<unsigned>(rb); i < db; ++i, v /= static_cast<unsigned>(p)) b[i] = v % p;
        b[db] = 1;
        if (poly_mulmod_brute(a, b, p) == f) return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("make_space validates q and n") {
  const auto s = FieldSpace::make(3, 2);
  CHECK(s.q() == 3);
  CHECK(s.characteristic() == 3);
  CHECK(s.dim() == 2);
  CHECK(s.size() == 9);

  const auto t = apfree::make_space(9, 1);
  CHECK(t.characteristic() == 3);
  CHECK(t.degree() == 2);
  CHECK(t.size() == 9);

  CHECK(kind_of([] { (void)FieldSpace::make(6, 2); }) == ErrorKind::NotPrimePower);
  CHECK(kind_of([] { (void)FieldSpace::make(1, 2); }) == ErrorKind::NotPrimePower);
  CHECK(kind_of([] { (void)FieldSpace::make(2, 63); }) == ErrorKind::Overflow);
  CHECK(kind_of([] { (void)FieldSpace::make(3, 40); }) == ErrorKind::Overflow);
  CHECK(FieldSpace::make(2, 62).size() == (std::uint64_t{1} << 62));
}

TEST_CASE("coordinatewise arithmetic examples") {
  const auto s = FieldSpace::make(3, 2);
  const std::vector<std::uint64_t> a{1, 2}, b{2, 2};
  const auto sum = s.coordinates(s.add(s.from_coordinates(a), s.from_coordinates(b)));
  CHECK(sum == std::vector<std::uint64_t>{0, 1});

  const auto f5 = FieldSpace::make(5, 1);
  CHECK(f5.scalar_mul(2, 3) == 1);

  for (const auto& [q, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 3}, {4, 2}, {5, 2}, {8, 2}, {9, 2}, {2, 6}, {257, 1}}) {
    const auto sp = FieldSpace::make(q, n);
    for (std::uint64_t x = 0; x < sp.size(); ++x) {
      REQUIRE(sp.add(x, sp.neg(x)) == 0);
      REQUIRE(sp.int_mul(2, x) == sp.add(x, x));
      if (sp.characteristic() > 2) REQUIRE(sp.scalar_mul(2, x) == sp.add(x, x));
    }
  }
  CHECK(kind_of([&] { (void)s.add(9, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("group laws on random triples agree with base-p digit arithmetic") {
  apfree::RngStream rng(2024);
  const std::vector<std::pair<std::uint64_t, unsigned>> spaces{{3, 4}, {4, 3}, {5, 3}, {7, 2}, {8, 2}, {9, 2},
                                                                {2, 10}, {11, 2}, {16, 2}, {25, 2}, {27, 1}, {257, 2},
                                                                {65537, 1}, {3, 30}};
  for (const auto& [q, n] : spaces) {
    const auto s = FieldSpace::make(q, n);
    const auto ref = oracle::DigitSpace::of(s);
    std::vector<std::uint64_t> xs(s.chunk_count()), ys(s.chunk_count());
    for (int i = 0; i < 10000 / static_cast<int>(spaces.size()) + 1; ++i) {
      const auto a = rng.bounded(s.size());
      const auto b = rng.bounded(s.size());
      const auto c = rng.bounded(s.size());
      REQUIRE(s.add(a, b) == s.add(b, a));
      REQUIRE(s.add(s.add(a, b), c) == s.add(a, s.add(b, c)));
      REQUIRE(s.sub(s.add(a, b), b) == a);
      REQUIRE(s.add(a, b) == ref.add(a, b));
      REQUIRE(s.sub(a, b) == ref.sub(a, b));
      REQUIRE(s.int_mul(-3, a) == ref.axpy(-3, a, 0));
      s.split(a, xs.data());
      s.split(b, ys.data());
      REQUIRE(s.add_split(xs.data(), ys.data()) == s.add(a, b));
      REQUIRE(s.sub_split(xs.data(), ys.data()) == s.sub(a, b));
    }
  }
}

TEST_CASE("digit encode and decode round-trip") {
  for (const auto& [q, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 10}, {5, 7}, {4, 8}, {9, 5}, {2, 16}, {7, 5}}) {
    const auto s = FieldSpace::make(q, n);
    REQUIRE(s.size() <= 100000);
    for (std::uint64_t x = 0; x < s.size(); ++x) {
      const auto c = s.coordinates(x);
      REQUIRE(c.size() == n);
      REQUIRE(s.from_coordinates(c) == x);
    }
  }
}

TEST_CASE("prime q: scalar multiplication is repeated addition") {
  for (const std::uint64_t q : {3ULL, 5ULL, 7ULL, 13ULL}) {
    const auto s = FieldSpace::make(q, 3);
    for (std::uint64_t a = 0; a < s.size(); a += 7) {
      std::uint64_t acc = 0;
      for (std::uint64_t c = 0; c < q; ++c) {
        REQUIRE(s.scalar_mul(c, a) == acc);
        REQUIRE(s.int_mul(static_cast<std::int64_t>(c), a) == acc);
        acc = s.add(acc, a);
      }
    }
  }
}

TEST_CASE("F_q is a field for non-prime q") {
  for (const std::uint64_t q : {4ULL, 8ULL, 9ULL, 16ULL, 25ULL, 27ULL, 32ULL, 49ULL, 64ULL, 81ULL, 121ULL, 125ULL, 128ULL,
                                243ULL, 256ULL, 512ULL, 625ULL}) {
    const auto s = FieldSpace::make(q, 1);
    const std::uint64_t step = q > 128 ? 7 : 1;
    for (std::uint64_t x = 1; x < q; x += step) {
      bool has_inverse = false;
      for (std::uint64_t y = 1; y < q; ++y) {
        const auto xy = s.field_mul(x, y);
        REQUIRE(xy != 0);
        REQUIRE(xy == s.field_mul(y, x));
        has_inverse = has_inverse || xy == 1;
      }
      REQUIRE(has_inverse);
    }
    apfree::RngStream rng(q);
    for (int i = 0; i < 2000; ++i) {
      const auto a = rng.bounded(q), b = rng.bounded(q), c = rng.bounded(q);
      REQUIRE(s.field_mul(s.field_mul(a, b), c) == s.field_mul(a, s.field_mul(b, c)));
      REQUIRE(s.field_mul(a, s.field_add(b, c)) == s.field_add(s.field_mul(a, b), s.field_mul(a, c)));
      REQUIRE(s.field_mul(1, a) == a);
    }
  }
}

TEST_CASE("defining polynomial is the least monic irreducible") {
  for (const std::uint64_t q : {4ULL, 8ULL, 9ULL, 16ULL, 25ULL, 27ULL, 49ULL, 81ULL}) {
    const auto s = FieldSpace::make(q, 1);
    const auto p = s.characteristic();
    const unsigned e = s.degree();
    std::uint64_t count = 1;
    for (unsigned i = 0; i < e; ++i) count *= p;
    std::vector<std::uint64_t> expected;
    for (std::uint64_t r = 0; r < count && expected.empty(); ++r) {
      std::vector<std::uint64_t> f(e + 1, 0);
      std::uint64_t v = r;
      for (unsigned i = 0; i < e; ++i, v /= p) f[i] = v % p;
      f[e] = 1;
      if (!reducible_brute(f, p)) expected = f;
    }
    CHECK(s.modulus() == expected);
  }
  CHECK(FieldSpace::make(4, 1).modulus() == std::vector<std::uint64_t>{1, 1, 1});
  CHECK(FieldSpace::make(8, 1).modulus() == std::vector<std::uint64_t>{1, 1, 0, 1});
}

TEST_CASE("characteristic gates for progressions") {
  CHECK_FALSE(FieldSpace::make(2, 4).supports_progressions(3));
  CHECK_FALSE(FieldSpace::make(4, 2).supports_progressions(3));
  CHECK(FieldSpace::make(3, 2).supports_progressions(3));
  CHECK_FALSE(FieldSpace::make(3, 2).supports_progressions(4));
  CHECK_FALSE(FieldSpace::make(9, 2).supports_progressions(4));
  CHECK(FieldSpace::make(5, 2).supports_progressions(4));
  CHECK(FieldSpace::make(25, 1).supports_progressions(4));
  CHECK(kind_of([] { FieldSpace::make(2, 3).require_progressions(3); }) == ErrorKind::CharTooSmall);
  CHECK(kind_of([] { FieldSpace::make(27, 1).require_progressions(4); }) == ErrorKind::CharTooSmall);
}
