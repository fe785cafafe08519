// SPDX-License-Identifier: Apache-2.0

#include "apfree/supersaturation.hpp"

#include <cmath>

#include "apfree/constructions.hpp"
#include "apfree/errors.hpp"
#include "apfree/progressions.hpp"
#include "apfree/rng.hpp"

namespace apfree {

namespace {

template <class Make>
std::vector<SupersatReport> run_trials(std::uint64_t trials, const Exec& exec, Make&& make) {
  auto parts = parallel_blocks<std::vector<SupersatReport>>(trials, exec.threads, [&](std::size_t b, std::size_t e) {
    std::vector<SupersatReport> out;
    for (std::size_t i = b; i < e; ++i) out.push_back(make(i));
    return out;
  });
  std::vector<SupersatReport> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return CounterRng(seed, 4).at(trial); }

std::vector<SupersatReport> verify_fqn_supersaturation(std::uint64_t q, unsigned n, const std::vector<double>& s_grid,
                                                       std::uint64_t trials, std::uint64_t seed, const Exec& exec) {
  const FieldSpace space = FieldSpace::make(q, n);
  space.require_progressions(3);
  require(space.size() <= 1'000'000, ErrorKind::SizeLimit, "q^n must be at most 10^6");
  const QConstants k = compute_constants(q);
  const double Q = static_cast<double>(space.size());
  const double qd = static_cast<double>(q);

  std::vector<SupersatReport> out;
  std::uint64_t block = 0;
  for (const double s : s_grid) {
    require(s >= 0.0 && s < k.c_q, ErrorKind::RangeError,
            "s = " + std::to_string(s) + " outside [0, c_q) = [0, " + std::to_string(k.c_q) + ")");
    const auto size = static_cast<std::uint64_t>(std::floor(std::pow(Q, 1.0 - s) + 1e-9));
    require(size >= 1, ErrorKind::RangeError, "sample size is zero");
    const double bound = std::pow(1.0 / (6.0 * std::pow(qd, n * s)), k.C_q) * Q * Q;
    const double m = static_cast<double>(size);
    const double expectation = m * (m - 1.0) * (m - 2.0) / (Q - 2.0);
    const std::uint64_t base = block;
    auto rows = run_trials(trials, exec, [&](std::uint64_t t) {
      SupersatReport r;
      r.kind = "fqn";
      r.q = q;
      r.n = n;
      r.s = s;
      r.trial = t;
      r.trial_seed = trial_seed(seed, base + t);
      const GroundSet A = random_subset_exact(space, size, r.trial_seed);
      const APCounts c = count_3aps(A);
      r.set_size = A.size();
      r.nontrivial_ordered = c.ordered_nontrivial;
      r.measured_count = c.ordered_nontrivial + A.size();
      r.predicted_lower_bound = bound;
      r.ratio = static_cast<double>(r.measured_count) / bound;
      r.pass = static_cast<double>(r.measured_count) >= bound;
      r.random_expectation = expectation;
      r.random_ratio = expectation > 0.0 ? static_cast<double>(c.ordered_nontrivial) / expectation : 0.0;
      r.trivial_correction_significant = static_cast<double>(A.size()) > 0.01 * bound;
      return r;
    });
    out.insert(out.end(), rows.begin(), rows.end());
    block += trials;
  }
  return out;
}

std::vector<SupersatReport> verify_varnavides(std::uint64_t N, const std::vector<double>& eta_grid, const HFunction& h,
                                              std::uint64_t trials, std::uint64_t seed, const Exec& exec) {
  require(N >= 3, ErrorKind::DomainError, "N must be at least 3");
  std::vector<SupersatReport> out;
  std::uint64_t block = 0;
  for (const double eta : eta_grid) {
    const BoundReport bound = varnavides_count(static_cast<double>(N), eta, h);
    const auto size = static_cast<std::uint64_t>(std::ceil(eta * static_cast<double>(N) - 1e-9));
    const double predicted = std::exp2(bound.log2_value);
    const std::uint64_t base = block;
    auto rows = run_trials(trials, exec, [&](std::uint64_t t) {
      SupersatReport r;
      r.kind = "varnavides";
      r.N = N;
      r.eta = eta;
      r.trial = t;
      r.trial_seed = trial_seed(seed, base + t);
      const GroundSet A = random_subset_exact(Interval{N}, size, r.trial_seed);
      const APCounts c = count_3aps(A);
      r.set_size = A.size();
      r.nontrivial_ordered = c.ordered_nontrivial;
      r.measured_count = c.unordered_nontrivial;
      r.predicted_lower_bound = predicted;
      r.ratio = static_cast<double>(r.measured_count) / predicted;
      r.pass = static_cast<double>(r.measured_count) >= predicted;
      return r;
    });
    out.insert(out.end(), rows.begin(), rows.end());
    block += trials;
  }
  return out;
}

}  // namespace apfree
