// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "apfree/constants.hpp"
#include "apfree/constructions.hpp"
#include "apfree/errors.hpp"
#include "apfree/progressions.hpp"
#include "apfree/supersaturation.hpp"
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

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t l = i; l <= j; ++l) r[idx[l]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("full space at s = 0") {
  for (const auto& [q, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 6}, {5, 4}, {7, 3}}) {
    const auto rows = verify_fqn_supersaturation(q, n, {0.0}, 2, 1);
    const double Q = std::pow(static_cast<double>(q), n);
    for (const auto& r : rows) {
      CHECK(r.set_size == static_cast<std::uint64_t>(Q));
      CHECK(static_cast<double>(r.nontrivial_ordered) == Q * (Q - 1));
      CHECK(static_cast<double>(r.measured_count) == Q * Q);
      CHECK(r.predicted_lower_bound == doctest::Approx(std::pow(6.0, -compute_constants(q).C_q) * Q * Q));
      CHECK(r.ratio == doctest::Approx(std::pow(6.0, compute_constants(q).C_q)));
      CHECK(r.pass);
    }
  }
}

TEST_CASE("F_3^8 trials never go below the explicit bound") {
  const auto rows = verify_fqn_supersaturation(3, 8, {0.0, 0.01, 0.02}, 20, 2024);
  REQUIRE(rows.size() == 60);
  const auto k = compute_constants(3);
  for (const auto& r : rows) {
    INFO("s = " << r.s << ", trial " << r.trial);
    CHECK(r.pass);
    CHECK(r.measured_count == r.nontrivial_ordered + r.set_size);
    CHECK(r.set_size == static_cast<std::uint64_t>(std::floor(std::pow(6561.0, 1 - r.s) + 1e-9)));
    CHECK(r.predicted_lower_bound == doctest::Approx(std::pow(1.0 / (6 * std::pow(3.0, 8 * r.s)), k.C_q) * 6561.0 * 6561.0));
    const double m = static_cast<double>(r.set_size);
    CHECK(r.random_expectation.value() == doctest::Approx(m * (m - 1) * (m - 2) / 6559.0));
    CHECK(r.trial_seed == trial_seed(2024, static_cast<std::uint64_t>(&r - rows.data())));
  }
}

TEST_CASE("measured counts match an independent triangle count") {
  const auto rows = verify_fqn_supersaturation(5, 3, {0.05}, 3, 77);
  const auto space = FieldSpace::make(5, 3);
  for (const auto& r : rows) {
    const auto A = random_subset_exact(space, r.set_size, r.trial_seed);
    CHECK(r.measured_count == oracle::triangles(A, A, dilate(A, -2)));
  }
  const auto vrows = verify_varnavides(200, {0.5}, HFunction::power(1.0), 3, 5);
  for (const auto& r : vrows) {
    const auto A = random_subset_exact(Interval{200}, r.set_size, r.trial_seed);
    CHECK(r.measured_count == oracle::triple_count(A));
  }
}

TEST_CASE("fqn errors") {
  const double c3 = compute_constants(3).c_q;
  CHECK(kind_of([&] { (void)verify_fqn_supersaturation(3, 6, {c3}, 1, 1); }) == ErrorKind::RangeError);
  CHECK(kind_of([] { (void)verify_fqn_supersaturation(3, 6, {5.0}, 1, 1); }) == ErrorKind::RangeError);
  CHECK(kind_of([] { (void)verify_fqn_supersaturation(3, 6, {-0.1}, 1, 1); }) == ErrorKind::RangeError);
  CHECK(kind_of([] { (void)verify_fqn_supersaturation(3, 13, {0.0}, 1, 1); }) == ErrorKind::SizeLimit);
  CHECK(kind_of([] { (void)verify_fqn_supersaturation(2, 6, {0.0}, 1, 1); }) == ErrorKind::CharTooSmall);
}

TEST_CASE("Varnavides examples") {
  const auto id = HFunction::power(1.0);
  const auto full = verify_varnavides(1000, {1.0}, id, 1, 1);
  std::uint64_t closed = 0;
  for (std::uint64_t d = 1; 2 * d < 1000; ++d) closed += 1000 - 2 * d;
  CHECK(full[0].measured_count == closed);
  CHECK(full[0].pass);
  CHECK(kind_of([&] { (void)verify_varnavides(10, {0.3}, id, 1, 1); }) == ErrorKind::PreconditionFailed);
  CHECK(kind_of([] { (void)verify_varnavides(10000, {0.2}, HFunction::log_power(0.1, 1.0), 1, 1); }) ==
        ErrorKind::PreconditionFailed);

  const auto rows = verify_varnavides(10000, {0.2}, HFunction::log_power(0.1, 0.5), 20, 9);
  REQUIRE(rows.size() == 20);
  for (const auto& r : rows) {
    CHECK(r.pass);
    CHECK(r.set_size == 2000);
  }
}

TEST_CASE("reproducible per seed and thread independent") {
  const auto a = verify_fqn_supersaturation(3, 7, {0.0, 0.02}, 6, 5, Exec{1});
  const auto b = verify_fqn_supersaturation(3, 7, {0.0, 0.02}, 6, 5, Exec{4});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].trial_seed == b[i].trial_seed);
    CHECK(a[i].measured_count == b[i].measured_count);
  }
  const auto h = HFunction::log_power(0.1, 0.5);
  const auto va = verify_varnavides(3000, {0.5}, h, 5, 3, Exec{1});
  const auto vb = verify_varnavides(3000, {0.5}, h, 5, 3, Exec{3});
  for (std::size_t i = 0; i < va.size(); ++i) CHECK(va[i].measured_count == vb[i].measured_count);
}

TEST_CASE("counts are monotone in density over the grid") {
  const auto h = HFunction::log_power(0.1, 0.5);
  const auto rows = verify_varnavides(4000, {0.2, 0.4, 0.6, 0.8, 1.0}, h, 8, 13);
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.eta);
    y.push_back(static_cast<double>(r.measured_count));
  }
  CHECK(spearman(x, y) > 0.9);

  const auto f = verify_fqn_supersaturation(3, 7, {0.0, 0.01, 0.02, 0.04, 0.06}, 8, 13);
  std::vector<double> xs, ys;
  for (const auto& r : f) {
    xs.push_back(1.0 - r.s);
    ys.push_back(static_cast<double>(r.measured_count));
  }
  CHECK(spearman(xs, ys) > 0.9);
}
