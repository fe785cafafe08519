// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apfree {

/// g(y) = (1 + y + ... + y^(q-1)) / y^((q-1)/3).
double g_function(std::uint64_t q, double y);

/// Slice-rank constants for F_q: q^(1 - c_q) = inf_{0<y<1} g(y) and
/// C_q = 1 + 1/c_q.
struct QConstants {
  std::uint64_t q = 0;
  double y_star = 0.0;
  double g_star = 0.0;
  double c_q = 0.0;
  double C_q = 0.0;
  /// false when the coarse bracket was not unimodal and the dense-grid
  /// fallback was used.
  bool bracket_unimodal = true;
};

/// Geometric 256-point bracket on [1e-6, 1 - 1e-6], then golden-section
/// refinement to relative tolerance 1e-12.
QConstants compute_constants(std::uint64_t q);

/// Uniform value of a formula evaluation. Cardinalities and probabilities
/// are carried as base-2 logarithms; `value` is set when representable.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double log2_value = 0.0;
  std::optional<double> value;
  std::vector<std::string> notes;
};

/// f_3(F_q^n) <= q^(n(1 - c_q)).
BoundReport eg_bound(const QConstants& k, unsigned n);

/// r_3(N) lower N (ln N)^(1/4) / 2^(2 sqrt(2 ln N)) and upper N / (ln N)^(1+c),
/// both with natural logarithms. N is real-valued so N = e^16 is expressible.
std::pair<BoundReport, BoundReport> r3_bounds(double N, double c_upper);

/// Default for the absolute constant c(3) <= 1000 * r * r!^3 of the
/// container theorem at r = 3.
inline constexpr double kContainerConstant = 1000.0 * 3 * 6 * 6 * 6;

struct ContainerParams {
  double log2_epsilon = 0.0;           // epsilon = q^(-beta n)
  double log2_tau = 0.0;               // tau = q^((n/2)(2 beta - 1 + s(C_q - 1)))
  double log2_count_exponent = 0.0;    // log2 of q^((n/2)(1 + s(C_q - 3) + 2 beta))
  double log2_log2_container_count = 0.0;  // log2 of c (n ln q)^2 q^(...)
  std::optional<std::uint64_t> iterations;  // ceil(t C_q / beta + 1)
  bool tau_hypothesis = false;  // tau < 1 / (200 r r!^2) = 1/21600
};

ContainerParams container_params(std::uint64_t q, unsigned n, double s, double beta, double C_q,
                                 std::optional<double> t = std::nullopt,
                                 double container_constant = kContainerConstant);

/// Hypotheses of the container theorem for an r-uniform hypergraph:
/// tau < 1/(200 r r!^2) and Delta(H, tau) <= epsilon / (12 r!).
struct ContainerHypotheses {
  bool tau_ok = false;
  bool delta_ok = false;
  double tau_limit = 0.0;
  double delta_limit = 0.0;
};
ContainerHypotheses container_hypotheses(double delta_value, double tau, double epsilon, int r = 3);

struct ProbabilityBound {
  double log2_m = 0.0;
  double log2_container_count = 0.0;   // log2 |C|
  double log2_product = 0.0;           // |C| (e p S / m)^m with S = q^(n(1-t))
  double log2_envelope = 0.0;          // (2e / q^(2 beta n))^m
  std::optional<double> log2_exact_product;  // exact binomial in place of (eS/m)^m, when m <= S
  BoundReport report;
};

/// p = q^(n * p_exponent). Admissible range: beta > 0, 0 <= t <= c_q(1 - 3 beta),
/// p_floor(t, beta) <= p_exponent <= 0 with
/// p_floor = -1/2 + t(C_q - 1)/2 - beta/2.
ProbabilityBound probability_bound(std::uint64_t q, unsigned n, double t, double beta, double p_exponent,
                                   double C_q, double c_qbeta);

/// Invertible functions h used with r_3(N) <= N / h(N).
struct HFunction {
  enum class Family { Power, LogPower };
  Family family = Family::Power;
  double a = 1.0;      // Power: h(x) = k x^a
  double k = 1.0;
  double c = 0.0;      // LogPower: h(x) = (ln x)^(1+c) / C
  double C = 1.0;

  static HFunction power(double a, double k = 1.0) { return {Family::Power, a, k, 0.0, 1.0}; }
  static HFunction log_power(double c, double C) { return {Family::LogPower, 1.0, 1.0, c, C}; }
  /// "power:a=1,k=2" or "logpower:c=0.1,C=1".
  static HFunction parse(const std::string& spec);
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double inverse(double y) const;
  /// ln h(x) from ln x; -inf where h is not positive.
  [[nodiscard]] double log_eval(double log_x) const;
  /// ln h^{-1}(y) from ln y.
  [[nodiscard]] double log_inverse(double log_y) const;
};

/// (eta / (2 M^4)) N^2 with M = h^{-1}(4 / eta); requires 1 <= floor(M) <= N.
BoundReport varnavides_count(double N, double eta, const HFunction& h);

struct ConditionSweep {
  std::string name;
  std::size_t evaluated = 0;
  std::size_t passed = 0;
  std::optional<double> first_failure_log_N;
  std::optional<double> last_failure_log_N;
};

struct HConditionReport {
  std::vector<ConditionSweep> conditions;
  /// Smallest sweep point from which every condition holds to the end of
  /// the sweep; the reported N_0 is exp of this.
  std::optional<double> threshold_log_N;
  [[nodiscard]] bool all_pass() const;
};

/// Evaluates, at `points` values of ln N equally spaced in [log_N_min, log_N_max]:
///   h_le_x:      h(N) <= N
///   monotone:    h(N) >= h(previous sweep point)
///   technical1:  h(N^(1/5) / 1000) >= 4 h(N^gamma)
///   technical:   N^(1/10) >= h(N^gamma)^(3/2) * h^{-1}(4 h(N^gamma))^2
HConditionReport check_h_conditions(const HFunction& h, double gamma, double log_N_min, double log_N_max,
                                    std::size_t points = 200);

/// 1 - 1/(2(C_q - 2)): exponent of the 4-AP-free construction in F_q^n.
double thm11_exponent(const QConstants& k);
/// p-floor exponent -1/2 + t(C_q - 1)/2 for random subsets.
double random_p_floor(const QConstants& k, double t);
/// Same floor with the additional -beta/2 of the container-lemma form.
double random_p_floor_restated(const QConstants& k, double t, double beta);
/// delta = eps / (2(C_q - 1)) for the low-energy construction.
double low_energy_delta(const QConstants& k, double eps);

}  // namespace apfree
