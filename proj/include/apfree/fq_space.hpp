// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "apfree/errors.hpp"

namespace apfree {

bool is_prime(std::uint64_t n) noexcept;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
};

/// Returns (p, e) with q = p^e, or nullopt when q is not a prime power.
std::optional<PrimePower> prime_power(std::uint64_t q) noexcept;

/// The vector space F_q^n with elements encoded as flat indices in [0, q^n).
///
/// An index is the little-endian base-q digit vector of coordinates. Each
/// base-q digit is itself the little-endian base-p coefficient vector of an
/// element of F_q = F_p[X]/(f), where f is the lexicographically least
/// monic irreducible of degree e. The whole index is therefore a base-p
/// digit vector of length e*n, and the group law is digitwise mod p.
///
/// For fast inner loops the digit vector is cut into chunks of k base-p
/// digits (p^k <= 256) with precomputed add/sub tables; `split` and the
/// `*_split` operations expose that representation.
class FieldSpace {
 public:
  static FieldSpace make(std::uint64_t q, unsigned n);

  [[nodiscard]] std::uint64_t q() const noexcept { return q_; }
  [[nodiscard]] std::uint64_t characteristic() const noexcept { return p_; }
  [[nodiscard]] unsigned degree() const noexcept { return e_; }
  [[nodiscard]] unsigned dim() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t size() const noexcept { return size_; }

  /// Coefficients c_0..c_e of the defining polynomial of F_q (c_e = 1).
  [[nodiscard]] const std::vector<std::uint64_t>& modulus() const noexcept;

  /// k-APs with distinct terms exist only when p > k - 1, i.e. p >= 3 for
  /// k = 3 and p >= 5 for k = 4.
  [[nodiscard]] bool supports_progressions(int k) const noexcept;
  void require_progressions(int k) const;

  [[nodiscard]] std::uint64_t zero() const noexcept { return 0; }
  [[nodiscard]] std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  [[nodiscard]] std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  [[nodiscard]] std::uint64_t neg(std::uint64_t a) const;
  /// c * a for a field scalar c in [0, q).
  [[nodiscard]] std::uint64_t scalar_mul(std::uint64_t c, std::uint64_t a) const;
  /// k * a for an integer k (k copies of a summed).
  [[nodiscard]] std::uint64_t int_mul(std::int64_t k, std::uint64_t a) const;

  /// Arithmetic in F_q on indices in [0, q).
  [[nodiscard]] std::uint64_t field_add(std::uint64_t x, std::uint64_t y) const;
  [[nodiscard]] std::uint64_t field_mul(std::uint64_t x, std::uint64_t y) const;

  [[nodiscard]] std::vector<std::uint64_t> coordinates(std::uint64_t a) const;
  [[nodiscard]] std::uint64_t from_coordinates(std::span<const std::uint64_t> coords) const;

  // Chunked representation.
  [[nodiscard]] unsigned chunk_count() const noexcept { return chunks_; }
  void split(std::uint64_t a, std::uint64_t* out) const noexcept;
  [[nodiscard]] std::uint64_t add_split(const std::uint64_t* x, const std::uint64_t* y) const noexcept {
    std::uint64_t r = 0;
    for (unsigned i = chunks_; i-- > 0;) r = r * chunk_base_ + chunk_add(x[i], y[i]);
    return r;
  }
  [[nodiscard]] std::uint64_t sub_split(const std::uint64_t* x, const std::uint64_t* y) const noexcept {
    std::uint64_t r = 0;
    for (unsigned i = chunks_; i-- > 0;) r = r * chunk_base_ + chunk_sub(x[i], y[i]);
    return r;
  }

  friend bool operator==(const FieldSpace& a, const FieldSpace& b) noexcept {
    return a.q_ == b.q_ && a.n_ == b.n_;
  }

 private:
  struct Tables;

  FieldSpace() = default;

  [[nodiscard]] std::uint64_t chunk_add(std::uint64_t x, std::uint64_t y) const noexcept {
    if (add_table_ != nullptr) return add_table_[x * chunk_base_ + y];
    const std::uint64_t s = x + y;
    return s >= p_ ? s - p_ : s;
  }
  [[nodiscard]] std::uint64_t chunk_sub(std::uint64_t x, std::uint64_t y) const noexcept {
    if (sub_table_ != nullptr) return sub_table_[x * chunk_base_ + y];
    return x >= y ? x - y : x + (p_ - y);
  }
  void check(std::uint64_t a) const;

  std::uint64_t q_ = 0;
  std::uint64_t p_ = 0;
  unsigned e_ = 0;
  unsigned n_ = 0;
  std::uint64_t size_ = 0;
  unsigned chunk_digits_ = 0;
  std::uint64_t chunk_base_ = 0;
  unsigned chunks_ = 0;
  std::shared_ptr<const Tables> tables_;
  const std::uint8_t* add_table_ = nullptr;
  const std::uint8_t* sub_table_ = nullptr;
};

/// make_space(q, n): validated FieldSpace.
inline FieldSpace make_space(std::uint64_t q, unsigned n) { return FieldSpace::make(q, n); }

}  // namespace apfree
