// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apfree/constants.hpp"
#include "apfree/parallel.hpp"

namespace apfree {

struct SupersatReport {
  std::string kind;  // "fqn" or "varnavides"
  std::uint64_t q = 0;
  unsigned n = 0;
  double s = 0.0;
  std::uint64_t N = 0;
  double eta = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::uint64_t set_size = 0;
  /// fqn: triangles in A x A x (-2A), i.e. ordered nontrivial 3-APs + |A|.
  /// varnavides: unordered nontrivial 3-APs.
  std::uint64_t measured_count = 0;
  std::uint64_t nontrivial_ordered = 0;
  double predicted_lower_bound = 0.0;
  double ratio = 0.0;
  bool pass = false;
  /// fqn only: expected ordered 3-APs of a uniform random set of this size.
  std::optional<double> random_expectation;
  std::optional<double> random_ratio;
  /// fqn only: the |A| trivial triangles exceed 1% of the bound.
  bool trivial_correction_significant = false;
};

/// Seed of trial i, shared by every thread layout.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Uniform subsets of size floor(q^(n(1-s))) compared with
/// (1/(6 q^(ns)))^(C_q) q^(2n).
std::vector<SupersatReport> verify_fqn_supersaturation(std::uint64_t q, unsigned n, const std::vector<double>& s_grid,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       const Exec& exec = {});

/// Uniform subsets of [N] of size ceil(eta N) compared with the Varnavides count.
std::vector<SupersatReport> verify_varnavides(std::uint64_t N, const std::vector<double>& eta_grid, const HFunction& h,
                                              std::uint64_t trials, std::uint64_t seed, const Exec& exec = {});

}  // namespace apfree
