// SPDX-License-Identifier: Apache-2.0

#include "apfree/constructions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_set>

#include "apfree/energy.hpp"
#include "apfree/errors.hpp"
#include "apfree/progressions.hpp"

namespace apfree {

namespace {

using u64 = std::uint64_t;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

u64 offset_of(const Ambient& ambient) { return std::holds_alternative<Interval>(ambient) ? 1 : 0; }

u64 universe_of(const Ambient& ambient) {
  if (const auto* iv = std::get_if<Interval>(&ambient)) return iv->N;
  return std::get<FieldSpace>(ambient).size();
}

// Positions (into set.members()) that survive deleting one member of every
// nontrivial k-AP.
std::vector<std::size_t> hitting_deletion(const GroundSet& set, int k, DeletionStrategy strategy,
                                          std::size_t& deleted) {
  const ProgressionList list = list_progressions(set, k);
  const std::size_t n = set.size();
  std::vector<char> gone(n, 0);
  deleted = 0;
  if (strategy == DeletionStrategy::Canonical) {
    for (std::size_t e = 0; e < list.size(); ++e) {
      const auto t = list[e];
      if (std::any_of(t.begin(), t.end(), [&](std::uint32_t v) { return gone[v] != 0; })) continue;
      gone[t.back()] = 1;
      ++deleted;
    }
  } else {
    std::vector<std::uint32_t> cover(n, 0);
    std::vector<std::uint32_t> start(n + 1, 0);
    for (const auto v : list.flat) ++start[v + 1];
    for (std::size_t v = 0; v < n; ++v) start[v + 1] += start[v];
    std::vector<std::uint32_t> incident(list.flat.size());
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t e = 0; e < list.size(); ++e) {
      for (const auto v : list[e]) {
        incident[fill[v]++] = static_cast<std::uint32_t>(e);
        ++cover[v];
      }
    }
    // max cover first, then smallest position
    using Entry = std::pair<std::uint32_t, std::int64_t>;
    std::priority_queue<Entry> heap;
    for (std::size_t v = 0; v < n; ++v) {
      if (cover[v] > 0) heap.emplace(cover[v], -static_cast<std::int64_t>(v));
    }
    std::vector<char> dead(list.size(), 0);
    while (!heap.empty()) {
      const auto [c, negv] = heap.top();
      heap.pop();
      const auto v = static_cast<std::size_t>(-negv);
      if (gone[v] != 0 || c != cover[v] || c == 0) continue;
      gone[v] = 1;
      ++deleted;
      for (std::uint32_t i = start[v]; i < start[v + 1]; ++i) {
        const auto e = incident[i];
        if (dead[e] != 0) continue;
        dead[e] = 1;
        for (const auto w : list[e]) {
          if (w == v) continue;
          --cover[w];
          if (cover[w] > 0 && gone[w] == 0) heap.emplace(cover[w], -static_cast<std::int64_t>(w));
        }
      }
      cover[v] = 0;
    }
  }
  std::vector<std::size_t> keep;
  keep.reserve(n - deleted);
  for (std::size_t v = 0; v < n; ++v) {
    if (gone[v] == 0) keep.push_back(v);
  }
  return keep;
}

Certificate certify(const GroundSet& set, int k, const Exec& exec) {
  const APCounts c = count_kaps(set, k, exec);
  if (c.unordered_nontrivial != 0) {
    fail(ErrorKind::InvariantViolation, "output still has " + std::to_string(c.unordered_nontrivial) + " " +
                                            std::to_string(k) + "-APs");
  }
  return {true, "exhaustive count_" + std::to_string(k) + "aps = 0"};
}

ConstructionReport remove_kaps(const GroundSet& set, int k, DeletionStrategy strategy, const Exec& exec) {
  require_progressions(set, k);
  ConstructionReport r;
  r.name = "remove_" + std::to_string(k) + "aps";
  r.parameters = {{"strategy", to_string(strategy)}, {"input_size", set.size()}};
  r.stages.push_back({"input", set.size(), 0.0});
  const auto t0 = Clock::now();
  std::size_t deleted = 0;
  const auto keep = hitting_deletion(set, k, strategy, deleted);
  r.output = set.subset(keep);
  r.deleted_count = deleted;
  r.stages.push_back({"deleted", r.output.size(), seconds_since(t0)});
  const auto t1 = Clock::now();
  (k == 3 ? r.three_ap_free : r.four_ap_free) = certify(r.output, k, exec);
  r.stages.push_back({"certified", r.output.size(), seconds_since(t1)});
  return r;
}

}  // namespace

GroundSet random_subset(const Ambient& universe, const RandomModel& model, const Exec& exec) {
  require(model.p > 0.0 && model.p <= 1.0, ErrorKind::DomainError, "p must lie in (0, 1]");
  require(model.generator_id == kGeneratorId, ErrorKind::InvalidArgument,
          "unknown generator " + model.generator_id);
  const u64 total = universe_of(universe);
  require(total <= GroundSet::kMaxUniverse, ErrorKind::SizeLimit, "universe too large");
  const u64 offset = offset_of(universe);
  const CounterRng rng(model.seed, 0);
  const auto parts = parallel_blocks<std::vector<u64>>(total, exec.threads, [&](std::size_t b, std::size_t e) {
    std::vector<u64> out;
    for (u64 i = b; i < e; ++i) {
      if (rng.bernoulli_at(i, model.p)) out.push_back(i + offset);
    }
    return out;
  });
  std::vector<u64> members;
  for (const auto& part : parts) members.insert(members.end(), part.begin(), part.end());
  return GroundSet(universe, std::move(members));
}

GroundSet random_subset_exact(const Ambient& universe, std::uint64_t size, std::uint64_t seed) {
  const u64 total = universe_of(universe);
  require(size <= total, ErrorKind::DomainError, "sample larger than the universe");
  RngStream rng(seed, 1);
  std::vector<u64> picked;
  picked.reserve(size);
  std::unordered_set<u64> seen;
  seen.reserve(size * 2);
  for (u64 j = total - size; j < total; ++j) {
    const u64 t = rng.bounded(j + 1);
    const u64 pick = seen.insert(t).second ? t : j;
    if (pick == j) seen.insert(j);
    picked.push_back(pick);
  }
  const u64 offset = offset_of(universe);
  for (auto& v : picked) v += offset;
  return GroundSet(universe, std::move(picked));
}

DeletionStrategy parse_strategy(const std::string& name) {
  if (name == "canonical") return DeletionStrategy::Canonical;
  if (name == "greedy") return DeletionStrategy::Greedy;
  fail(ErrorKind::ParseError, "unknown deletion strategy: " + name);
}

std::string to_string(DeletionStrategy s) { return s == DeletionStrategy::Canonical ? "canonical" : "greedy"; }

ConstructionReport remove_4aps(const GroundSet& set, DeletionStrategy strategy, const Exec& exec) {
  return remove_kaps(set, 4, strategy, exec);
}

ConstructionReport remove_3aps(const GroundSet& set, DeletionStrategy strategy, const Exec& exec) {
  return remove_kaps(set, 3, strategy, exec);
}

ConstructionReport pipeline_thm11(const FieldSpace& space, std::uint64_t seed, const Exec& exec) {
  space.require_progressions(4);
  const double q = static_cast<double>(space.q());
  const double n = space.dim();
  require(std::pow(q, 2.0 * n / 3.0) / 100.0 >= 50.0, ErrorKind::TooSmall,
          "q^(2n/3)/100 < 50");
  const double p = std::pow(q, -n / 3.0) / 100.0;
  const double qn = static_cast<double>(space.size());

  const auto t0 = Clock::now();
  const GroundSet sample = random_subset(space, RandomModel{p, seed}, exec);
  const double sample_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const APCounts before = count_4aps(sample, exec);
  const double count_seconds = seconds_since(t1);

  ConstructionReport r = remove_4aps(sample, DeletionStrategy::Canonical, exec);
  r.name = "pipeline_thm11";
  r.parameters = {{"q", space.q()},
                  {"n", space.dim()},
                  {"seed", seed},
                  {"generator", std::string(kGeneratorId)},
                  {"p", p},
                  {"strategy", "canonical"}};
  r.stages.front() = {"sampled", sample.size(), sample_seconds};
  r.stages.insert(r.stages.begin() + 1, Stage{"counted", sample.size(), count_seconds});
  r.diagnostics = {{"expected_size", p * qn},
                   {"size_sigma", std::sqrt(qn * p * (1.0 - p))},
                   {"four_aps_before", before.unordered_nontrivial},
                   {"four_ap_reference", std::pow(p, 4) * qn * qn}};
  return r;
}

ConstructionReport pipeline_lowenergy(const FieldSpace& space, double eps, std::uint64_t seed, const Exec& exec) {
  space.require_progressions(3);
  require(eps > 0.0 && eps < 1.0, ErrorKind::DomainError, "eps must lie in (0, 1)");
  const double q = static_cast<double>(space.q());
  const double n = space.dim();
  const double shift = eps / (4.0 - 2.0 * eps);
  const double p = std::pow(q, n * (-0.5 + shift));
  const double qn = static_cast<double>(space.size());
  require(p * qn >= 50.0, ErrorKind::TooSmall, "expected size p q^n below 50");

  ConstructionReport r;
  r.name = "pipeline_lowenergy";
  r.parameters = {{"q", space.q()},
                  {"n", space.dim()},
                  {"eps", eps},
                  {"seed", seed},
                  {"generator", std::string(kGeneratorId)},
                  {"p", p}};
  const auto t0 = Clock::now();
  r.output = random_subset(space, RandomModel{p, seed}, exec);
  r.stages.push_back({"sampled", r.output.size(), seconds_since(t0)});
  const auto t1 = Clock::now();
  const EnergyProfile e = energy_profile(r.output, exec);
  r.stages.push_back({"energy", r.output.size(), seconds_since(t1)});
  r.diagnostics = {{"energy", e.energy},
                   {"t_ordered", e.t_ordered},
                   {"expected_energy_reference", std::pow(p, 4) * qn * qn * qn},
                   {"energy_envelope", 100.0 * std::pow(q, n * (1.0 + 4.0 * shift))},
                   {"size_envelope", std::pow(q, n * (0.5 + shift)) / 100.0},
                   {"expected_size", p * qn}};
  return r;
}

SparseRegimeCheck sparse_regime_check(const FieldSpace& space) {
  space.require_progressions(3);
  const double qn = static_cast<double>(space.size());
  SparseRegimeCheck c;
  c.p = std::pow(qn, -0.5) / 2.0;
  c.expected_ordered_3aps = c.p * c.p * c.p * qn * (qn - 1.0);
  c.expected_size = c.p * qn;
  return c;
}

GroundSet digits_base6(std::uint64_t N) {
  require(N >= 1, ErrorKind::DomainError, "N must be at least 1");
  require(N <= GroundSet::kMaxUniverse, ErrorKind::SizeLimit, "N too large");
  std::vector<u64> out;
  // Counting in base 3 and reading the digits in base 6 visits the set in order.
  for (u64 k = 1;; ++k) {
    u64 v = 0;
    u64 place = 1;
    for (u64 x = k; x > 0; x /= 3) {
      v += (x % 3) * place;
      place *= 6;
    }
    if (v > N) break;
    out.push_back(v);
  }
  return GroundSet::interval(N, std::move(out));
}

std::vector<std::uint64_t> psi_map(std::uint64_t m, const AnnulusParams& params) {
  require(params.theta.size() == params.d && params.alpha.size() == params.d, ErrorKind::InvalidArgument,
          "theta and alpha must have d coordinates");
  std::vector<u64> x(params.d);
  for (unsigned i = 0; i < params.d; ++i) x[i] = m * params.theta[i] + params.alpha[i];
  return x;
}

double torus_norm(const std::vector<std::uint64_t>& x) {
  double s = 0.0;
  for (const auto u : x) {
    const double c = static_cast<double>(u) * 0x1.0p-64;
    s += c * c;
  }
  return std::sqrt(s);
}

namespace {

constexpr u64 kHalf = u64{1} << 63;

bool in_box(const std::vector<u64>& x) {
  return std::all_of(x.begin(), x.end(), [](u64 u) { return u <= kHalf; });
}

bool norm_in_shell(double norm, double r, double delta) { return r - delta <= norm && norm <= r; }

// Norm of the torus point folded to [-1/2, 1/2)^d.
double folded_norm(const std::vector<u64>& x) {
  double s = 0.0;
  for (const auto u : x) {
    const double c = static_cast<double>(static_cast<std::int64_t>(u)) * 0x1.0p-64;
    s += c * c;
  }
  return std::sqrt(s);
}

}  // namespace

bool in_shell(const std::vector<std::uint64_t>& x, double r, double delta) {
  return in_box(x) && norm_in_shell(torus_norm(x), r, delta);
}

AnnulusDefaults annulus_defaults(std::uint64_t N, std::uint64_t t_ordered, double c_prime) {
  require(t_ordered > 0 && N > 0, ErrorKind::DomainError, "annulus defaults need N > 0 and T > 0");
  AnnulusDefaults a;
  const double Nd = static_cast<double>(N);
  a.t = Nd * Nd / static_cast<double>(t_ordered);
  const double l = std::log2(Nd / a.t);
  a.d = l > 0.0 ? std::max(1U, static_cast<unsigned>(std::ceil(std::sqrt(2.0 * l)))) : 1U;
  a.delta = c_prime * std::sqrt(static_cast<double>(a.d)) * std::pow(a.t / Nd, 2.0 / a.d);
  return a;
}

ConstructionReport annulus_construct(const GroundSet& set, std::uint64_t seed, std::optional<unsigned> d,
                                     std::optional<double> delta, double c_prime, DeletionStrategy strategy,
                                     const Exec& exec) {
  require(set.is_interval(), ErrorKind::AmbientMismatch, "annulus construction needs an interval ambient");
  require(set.size() >= 10, ErrorKind::TooSmall, "annulus construction needs |A| >= 10");
  require(c_prime > 0.0, ErrorKind::DomainError, "C' must be positive");
  const u64 N = std::get<Interval>(set.ambient()).N;

  ConstructionReport r;
  r.name = "annulus_construct";
  r.stages.push_back({"input", set.size(), 0.0});
  const auto t0 = Clock::now();
  const APCounts initial = count_3aps(set, exec);
  if (initial.unordered_nontrivial == 0) {
    r.output = set;
    r.three_ap_free = Certificate{true, "exhaustive count_3aps = 0"};
    r.parameters = {{"seed", seed}, {"N", N}, {"projection", false}};
    r.stages.push_back({"certified", set.size(), seconds_since(t0)});
    return r;
  }
  const u64 T = set.size() + initial.ordered_nontrivial;
  const AnnulusDefaults def = annulus_defaults(N, T, c_prime);

  AnnulusParams ap;
  ap.d = d.value_or(def.d);
  ap.delta = delta.value_or(def.delta);
  require(ap.d >= 1 && ap.d <= 64, ErrorKind::DomainError, "d must lie in [1, 64]");
  const double r_max = std::sqrt(static_cast<double>(ap.d)) / 2.0;
  require(ap.delta >= 0x1.0p-30 && ap.delta < r_max, ErrorKind::DomainError,
          "delta must lie in [2^-30, sqrt(d)/2)");
  RngStream rng(seed, 2);
  ap.theta.resize(ap.d);
  ap.alpha.resize(ap.d);
  for (auto& v : ap.theta) v = rng.next_u64();
  for (auto& v : ap.alpha) v = rng.next_u64();

  const auto members = set.members();
  std::vector<std::size_t> box_pos;
  std::vector<double> norms;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto x = psi_map(members[i], ap);
    if (!in_box(x)) continue;
    box_pos.push_back(i);
    norms.push_back(torus_norm(x));
  }
  r.stages.push_back({"box", box_pos.size(), seconds_since(t0)});

  const auto t1 = Clock::now();
  const auto shells = static_cast<u64>(std::floor(r_max / ap.delta));
  std::map<u64, std::size_t> shell_count;
  for (const double nrm : norms) {
    const auto base = static_cast<u64>(std::floor(nrm / ap.delta));
    for (u64 k = base; k <= base + 1; ++k) {
      if (k >= 1 && k <= shells && norm_in_shell(nrm, static_cast<double>(k) * ap.delta, ap.delta)) ++shell_count[k];
    }
  }
  u64 best_k = 0;
  std::size_t best = 0;
  for (const auto& [k, c] : shell_count) {
    if (c > best) {
      best = c;
      best_k = k;
    }
  }
  if (best == 0) fail(ErrorKind::DegenerateShell, "every shell preimage is empty for seed " + std::to_string(seed));
  ap.r = static_cast<double>(best_k) * ap.delta;
  std::vector<std::size_t> shell_pos;
  for (std::size_t j = 0; j < box_pos.size(); ++j) {
    if (norm_in_shell(norms[j], ap.r, ap.delta)) shell_pos.push_back(box_pos[j]);
  }
  const GroundSet shell = set.subset(shell_pos);
  r.stages.push_back({"shell", shell.size(), seconds_since(t1)});

  const auto t2 = Clock::now();
  const ProgressionList residual = list_progressions(shell, 3);
  std::size_t within = 0;
  const double bound = std::sqrt(2.0 * ap.delta * ap.r);
  AnnulusParams linear = ap;
  std::fill(linear.alpha.begin(), linear.alpha.end(), 0);
  for (std::size_t e = 0; e < residual.size(); ++e) {
    const auto t = residual[e];
    const u64 y = shell[t[1]] - shell[t[0]];
    if (folded_norm(psi_map(y, linear)) <= bound) ++within;
  }
  std::size_t deleted = 0;
  const auto keep = hitting_deletion(shell, 3, strategy, deleted);
  r.output = shell.subset(keep);
  r.deleted_count = deleted;
  r.stages.push_back({"deleted", r.output.size(), seconds_since(t2)});

  const auto t3 = Clock::now();
  r.three_ap_free = certify(r.output, 3, exec);
  r.stages.push_back({"certified", r.output.size(), seconds_since(t3)});

  r.parameters = {{"seed", seed},
                  {"generator", std::string(kGeneratorId)},
                  {"N", N},
                  {"projection", true},
                  {"c_prime", c_prime},
                  {"strategy", to_string(strategy)},
                  {"T", T},
                  {"t", def.t},
                  {"d", ap.d},
                  {"delta", ap.delta},
                  {"r", ap.r},
                  {"theta", ap.theta},
                  {"alpha", ap.alpha}};
  r.diagnostics = {{"shell_count", shells},
                   {"residual_3aps", residual.size()},
                   {"parallelogram_within", within},
                   {"parallelogram_bound", bound},
                   {"size_scale", static_cast<double>(N) * ap.delta * std::pow(2.0, -static_cast<double>(ap.d))}};
  r.annulus = std::move(ap);
  return r;
}

}  // namespace apfree
