// SPDX-License-Identifier: Apache-2.0

#include "apfree/fq_space.hpp"

#include <array>
#include <cmath>
#include <string>

namespace apfree {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) noexcept { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) noexcept {
  u64 r = 1 % m;
  base %= m;
  while (exp != 0) {
    if ((exp & 1U) != 0) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return r;
}

// Exact a^e, or nullopt past 2^63.
std::optional<u64> checked_pow(u64 a, unsigned e) noexcept {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= a;
    if (r >= (u128{1} << 63)) return std::nullopt;
  }
  return static_cast<u64>(r);
}

using Poly = std::vector<u64>;  // coefficients, low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f for monic f.
Poly poly_mod(Poly a, const Poly& f, u64 p) {
  const std::size_t df = f.size() - 1;
  trim(a);
  while (a.size() > df) {
    const u64 lead = a.back();
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(lead, f[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
  }
  return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, u64 exp, const Poly& f, u64 p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (exp != 0) {
    if ((exp & 1U) != 0) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    exp >>= 1U;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // make b monic, then a mod b
    const u64 inv = powmod(b.back(), p - 2, p);
    for (auto& c : b) c = mulmod(c, inv, p);
    a = poly_mod(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

// Rabin's irreducibility test for monic f of degree e over F_p.
bool is_irreducible(const Poly& f, u64 p) {
  const unsigned e = static_cast<unsigned>(f.size() - 1);
  std::vector<Poly> frob(e + 1);  // frob[j] = x^(p^j) mod f
  frob[0] = poly_mod(Poly{0, 1}, f, p);
  for (unsigned j = 1; j <= e; ++j) frob[j] = poly_powmod(frob[j - 1], p, f, p);
  Poly x = poly_mod(Poly{0, 1}, f, p);
  if (frob[e] != x) return false;
  for (unsigned r = 2; r <= e; ++r) {
    if (e % r != 0 || !is_prime(r)) continue;
    Poly h = frob[e / r];
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    const Poly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

Poly least_irreducible(u64 p, unsigned e) {
  const u64 count = *checked_pow(p, e);
  for (u64 r = 0; r < count; ++r) {
    Poly f(e + 1, 0);
    u64 v = r;
    for (unsigned i = 0; i < e; ++i) {
      f[i] = v % p;
      v /= p;
    }
    f[e] = 1;
    if (f[0] == 0) continue;
    if (is_irreducible(f, p)) return f;
  }
  fail(ErrorKind::InvariantViolation, "no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<PrimePower> prime_power(std::uint64_t q) noexcept {
  if (q < 2) return std::nullopt;
  for (unsigned e = 63; e >= 1; --e) {
    const auto guess = static_cast<u64>(std::llround(std::pow(static_cast<double>(q), 1.0 / e)));
    for (u64 r = guess > 1 ? guess - 1 : 1; r <= guess + 1; ++r) {
      if (r < 2) continue;
      const auto power = checked_pow(r, e);
      if (power && *power == q && is_prime(r)) return PrimePower{r, e};
    }
  }
  return std::nullopt;
}

struct FieldSpace::Tables {
  Poly modulus;
  std::vector<std::uint8_t> add;
  std::vector<std::uint8_t> sub;
  std::vector<std::uint16_t> mul;  // F_q products when q <= 256
};

FieldSpace FieldSpace::make(std::uint64_t q, unsigned n) {
  require(q >= 2, ErrorKind::NotPrimePower, "q must be at least 2");
  require(n >= 1, ErrorKind::InvalidArgument, "dimension must be at least 1");
  const auto pp = prime_power(q);
  require(pp.has_value(), ErrorKind::NotPrimePower, std::to_string(q) + " is not a prime power");
  const auto size = checked_pow(q, n);
  require(size.has_value(), ErrorKind::Overflow,
          std::to_string(q) + "^" + std::to_string(n) + " does not fit below 2^63");

  FieldSpace s;
  s.q_ = q;
  s.p_ = pp->prime;
  s.e_ = pp->exponent;
  s.n_ = n;
  s.size_ = *size;

  const unsigned digits = s.e_ * n;
  unsigned k = 1;
  while (k < digits && checked_pow(s.p_, k + 1).value_or(~u64{0}) <= 256) ++k;
  s.chunk_digits_ = k;
  s.chunk_base_ = *checked_pow(s.p_, k);
  s.chunks_ = (digits + k - 1) / k;

  auto tables = std::make_shared<Tables>();
  if (s.e_ > 1) tables->modulus = least_irreducible(s.p_, s.e_);
  else tables->modulus = {0, 1};

  if (s.chunk_base_ <= 256) {
    const u64 base = s.chunk_base_;
    tables->add.resize(base * base);
    tables->sub.resize(base * base);
    for (u64 x = 0; x < base; ++x) {
      for (u64 y = 0; y < base; ++y) {
        u64 sum = 0;
        u64 diff = 0;
        u64 weight = 1;
        u64 xv = x;
        u64 yv = y;
        for (unsigned i = 0; i < k; ++i) {
          const u64 dx = xv % s.p_;
          const u64 dy = yv % s.p_;
          sum += ((dx + dy) % s.p_) * weight;
          diff += ((dx + s.p_ - dy) % s.p_) * weight;
          weight *= s.p_;
          xv /= s.p_;
          yv /= s.p_;
        }
        tables->add[x * base + y] = static_cast<std::uint8_t>(sum);
        tables->sub[x * base + y] = static_cast<std::uint8_t>(diff);
      }
    }
  }
  s.tables_ = tables;
  if (!tables->add.empty()) {
    s.add_table_ = tables->add.data();
    s.sub_table_ = tables->sub.data();
  }
  if (q <= 256 && s.e_ > 1) {
    std::vector<std::uint16_t> mul(q * q);
    for (u64 x = 0; x < q; ++x) {
      for (u64 y = 0; y < q; ++y) mul[x * q + y] = static_cast<std::uint16_t>(s.field_mul(x, y));
    }
    tables->mul = std::move(mul);
  }
  return s;
}

const std::vector<std::uint64_t>& FieldSpace::modulus() const noexcept { return tables_->modulus; }

bool FieldSpace::supports_progressions(int k) const noexcept {
  return k >= 2 && p_ >= static_cast<u64>(k);
}

void FieldSpace::require_progressions(int k) const {
  // p must not divide any of 1..k-1, i.e. p >= k for k in {3, 4} (p = 4 is not prime).
  const u64 need = k == 4 ? 5 : 3;
  require(p_ >= need, ErrorKind::CharTooSmall,
          std::to_string(k) + "-APs need characteristic >= " + std::to_string(need) +
              ", got " + std::to_string(p_));
}

void FieldSpace::check(std::uint64_t a) const {
  if (a >= size_) {
    fail(ErrorKind::InvalidArgument,
         "element index " + std::to_string(a) + " out of range for size " + std::to_string(size_));
  }
}

void FieldSpace::split(std::uint64_t a, std::uint64_t* out) const noexcept {
  for (unsigned i = 0; i < chunks_; ++i) {
    out[i] = a % chunk_base_;
    a /= chunk_base_;
  }
}

std::uint64_t FieldSpace::add(std::uint64_t a, std::uint64_t b) const {
  check(a);
  check(b);
  if (p_ == 2) return a ^ b;
  std::array<u64, 64> x{};
  std::array<u64, 64> y{};
  split(a, x.data());
  split(b, y.data());
  return add_split(x.data(), y.data());
}

std::uint64_t FieldSpace::sub(std::uint64_t a, std::uint64_t b) const {
  check(a);
  check(b);
  if (p_ == 2) return a ^ b;
  std::array<u64, 64> x{};
  std::array<u64, 64> y{};
  split(a, x.data());
  split(b, y.data());
  return sub_split(x.data(), y.data());
}

std::uint64_t FieldSpace::neg(std::uint64_t a) const { return sub(0, a); }

std::uint64_t FieldSpace::int_mul(std::int64_t k, std::uint64_t a) const {
  check(a);
  const auto sp = static_cast<std::int64_t>(p_);
  const auto factor = static_cast<u64>(((k % sp) + sp) % sp);
  if (e_ * n_ == 1) return mulmod(a, factor, p_);
  u64 r = 0;
  u64 weight = 1;
  const unsigned digits = e_ * n_;
  for (unsigned i = 0; i < digits; ++i) {
    r += mulmod(a % p_, factor, p_) * weight;
    a /= p_;
    if (i + 1 < digits) weight *= p_;
  }
  return r;
}

std::uint64_t FieldSpace::field_add(std::uint64_t x, std::uint64_t y) const {
  require(x < q_ && y < q_, ErrorKind::InvalidArgument, "field scalar out of range");
  if (e_ == 1) return (x + y) % p_;
  u64 r = 0;
  u64 weight = 1;
  for (unsigned i = 0; i < e_; ++i) {
    r += ((x % p_ + y % p_) % p_) * weight;
    x /= p_;
    y /= p_;
    weight *= p_;
  }
  return r;
}

std::uint64_t FieldSpace::field_mul(std::uint64_t x, std::uint64_t y) const {
  require(x < q_ && y < q_, ErrorKind::InvalidArgument, "field scalar out of range");
  if (e_ == 1) return mulmod(x, y, p_);
  if (tables_ && !tables_->mul.empty()) return tables_->mul[x * q_ + y];
  Poly a(e_);
  Poly b(e_);
  for (unsigned i = 0; i < e_; ++i) {
    a[i] = x % p_;
    b[i] = y % p_;
    x /= p_;
    y /= p_;
  }
  trim(a);
  trim(b);
  const Poly r = poly_mulmod(a, b, tables_->modulus, p_);
  u64 v = 0;
  for (std::size_t i = r.size(); i-- > 0;) v = v * p_ + r[i];
  return v;
}

std::uint64_t FieldSpace::scalar_mul(std::uint64_t c, std::uint64_t a) const {
  check(a);
  require(c < q_, ErrorKind::InvalidArgument, "scalar out of range");
  u64 r = 0;
  u64 weight = 1;
  for (unsigned i = 0; i < n_; ++i) {
    r += field_mul(c, a % q_) * weight;
    a /= q_;
    if (i + 1 < n_) weight *= q_;
  }
  return r;
}

std::vector<std::uint64_t> FieldSpace::coordinates(std::uint64_t a) const {
  check(a);
  std::vector<u64> out(n_);
  for (auto& c : out) {
    c = a % q_;
    a /= q_;
  }
  return out;
}

std::uint64_t FieldSpace::from_coordinates(std::span<const std::uint64_t> coords) const {
  require(coords.size() == n_, ErrorKind::InvalidArgument, "wrong coordinate count");
  u64 r = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    require(coords[i] < q_, ErrorKind::InvalidArgument, "coordinate out of range");
    r = r * q_ + coords[i];
  }
  return r;
}

}  // namespace apfree
