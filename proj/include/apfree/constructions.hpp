// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "apfree/ground_set.hpp"
#include "apfree/parallel.hpp"
#include "apfree/rng.hpp"

namespace apfree {

struct RandomModel {
  double p = 1.0;
  std::uint64_t seed = 0;
  std::string generator_id{kGeneratorId};
};

/// Bernoulli(p) subset; element with index i (value - 1 on intervals) uses
/// draw i of stream 0, so the result is independent of the thread count.
GroundSet random_subset(const Ambient& universe, const RandomModel& model, const Exec& exec = {});

/// Exactly `size` elements drawn uniformly without replacement (Floyd's algorithm).
GroundSet random_subset_exact(const Ambient& universe, std::uint64_t size, std::uint64_t seed);

struct Certificate {
  bool holds = false;
  std::string method;
};

struct Stage {
  std::string name;
  std::size_t size = 0;
  double seconds = 0.0;
};

struct AnnulusParams {
  unsigned d = 0;
  double delta = 0.0;
  double r = 0.0;
  std::vector<std::uint64_t> theta;  // fractions over 2^64
  std::vector<std::uint64_t> alpha;
};

struct ConstructionReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  GroundSet output = GroundSet::interval(0, {});
  std::optional<Certificate> three_ap_free;
  std::optional<Certificate> four_ap_free;
  std::size_t deleted_count = 0;
  std::vector<Stage> stages;
  nlohmann::json diagnostics = nlohmann::json::object();
  std::optional<AnnulusParams> annulus;
};

enum class DeletionStrategy { Canonical, Greedy };

DeletionStrategy parse_strategy(const std::string& name);
std::string to_string(DeletionStrategy s);

/// Deletes one element from every nontrivial 4-AP and certifies the result.
/// Canonical: scan progressions in lexicographic order of sorted member
/// positions, delete the largest member of each one not already hit.
/// Greedy: repeatedly delete the member on the most surviving progressions,
/// ties to the smallest member.
ConstructionReport remove_4aps(const GroundSet& set, DeletionStrategy strategy = DeletionStrategy::Canonical,
                               const Exec& exec = {});

/// Same deletion rules for 3-APs.
ConstructionReport remove_3aps(const GroundSet& set, DeletionStrategy strategy = DeletionStrategy::Canonical,
                               const Exec& exec = {});

/// Random subset with p = q^(-n/3) / 100, then canonical 4-AP deletion.
ConstructionReport pipeline_thm11(const FieldSpace& space, std::uint64_t seed, const Exec& exec = {});

/// Random subset with p = q^(n(-1/2 + eps/(4 - 2 eps))) and its exact energy.
ConstructionReport pipeline_lowenergy(const FieldSpace& space, double eps, std::uint64_t seed,
                                      const Exec& exec = {});

/// At p = q^(-n/2) / 2: expected ordered 3-APs p^3 q^n (q^n - 1) against
/// expected size p q^n.
struct SparseRegimeCheck {
  double p = 0.0;
  double expected_ordered_3aps = 0.0;
  double expected_size = 0.0;
};
SparseRegimeCheck sparse_regime_check(const FieldSpace& space);

/// m in [1, N] whose base-6 digits all lie in {0, 1, 2}.
GroundSet digits_base6(std::uint64_t N);

/// Coordinates of m theta + alpha mod 1 as fractions over 2^64.
std::vector<std::uint64_t> psi_map(std::uint64_t m, const AnnulusParams& params);

/// ||x||_2 of a torus point read in [0, 1)^d.
double torus_norm(const std::vector<std::uint64_t>& x);

/// r - delta <= ||x|| <= r with every coordinate in [0, 1/2].
bool in_shell(const std::vector<std::uint64_t>& x, double r, double delta);

/// Default d and delta for a set with T = t_ordered, N = ambient bound.
struct AnnulusDefaults {
  double t = 0.0;  // N^2 / T
  unsigned d = 1;
  double delta = 0.0;
};
AnnulusDefaults annulus_defaults(std::uint64_t N, std::uint64_t t_ordered, double c_prime = 1.0);

ConstructionReport annulus_construct(const GroundSet& set, std::uint64_t seed, std::optional<unsigned> d = std::nullopt,
                                     std::optional<double> delta = std::nullopt, double c_prime = 1.0,
                                     DeletionStrategy strategy = DeletionStrategy::Canonical, const Exec& exec = {});

}  // namespace apfree
