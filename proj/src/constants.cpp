// SPDX-License-Identifier: Apache-2.0

#include "apfree/constants.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "apfree/errors.hpp"
#include "apfree/fq_space.hpp"

namespace apfree {

namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949;

// ln g(y), stable for large q and y near 0 or 1.
double log_g(std::uint64_t q, double y) {
  const double qd = static_cast<double>(q);
  const double ly = std::log(y);
  // 1 + y + ... + y^(q-1) = (1 - y^q) / (1 - y)
  const double num = -std::expm1(qd * ly);
  const double den = -std::expm1(ly);
  return std::log(num) - std::log(den) - (qd - 1.0) / 3.0 * ly;
}

std::pair<double, double> golden(std::uint64_t q, double a, double b) {
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = log_g(q, x1);
  double f2 = log_g(q, x2);
  for (int it = 0; it < 400 && (b - a) > 1e-12 * (std::fabs(a) + std::fabs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = log_g(q, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = log_g(q, x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

std::optional<double> representable(double log2_value) {
  if (!std::isfinite(log2_value) || log2_value > 1023.0 || log2_value < -1074.0) return std::nullopt;
  return std::exp2(log2_value);
}

BoundReport make_report(std::string name, std::vector<std::pair<std::string, double>> inputs,
                        double log2_value) {
  BoundReport r;
  r.name = std::move(name);
  r.inputs = std::move(inputs);
  r.log2_value = log2_value;
  r.value = representable(log2_value);
  return r;
}

}  // namespace

double g_function(std::uint64_t q, double y) {
  require(y > 0.0 && y < 1.0, ErrorKind::DomainError, "g(y) needs 0 < y < 1");
  double sum = 0.0;
  double term = 1.0;
  for (std::uint64_t i = 0; i < q; ++i) {
    sum += term;
    term *= y;
  }
  return sum / std::pow(y, (static_cast<double>(q) - 1.0) / 3.0);
}

QConstants compute_constants(std::uint64_t q) {
  require(q != 2, ErrorKind::QTooSmall, "q = 2 has no 3-term progressions");
  require(q >= 3 && prime_power(q).has_value(), ErrorKind::NotPrimePower,
          std::to_string(q) + " is not a prime power");

  constexpr std::size_t kGrid = 256;
  constexpr double lo = 1e-6;
  constexpr double hi = 1.0 - 1e-6;
  std::array<double, kGrid> ys{};
  std::array<double, kGrid> fs{};
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(kGrid - 1));
  for (std::size_t i = 0; i < kGrid; ++i) {
    ys[i] = i + 1 == kGrid ? hi : lo * std::pow(ratio, static_cast<double>(i));
    fs[i] = log_g(q, ys[i]);
  }

  // Unimodal means the discrete slope goes from negative to non-negative once.
  int sign_changes = 0;
  for (std::size_t i = 1; i + 1 < kGrid; ++i) {
    const bool down_before = fs[i] < fs[i - 1];
    const bool down_after = fs[i + 1] < fs[i];
    if (down_before != down_after) ++sign_changes;
  }
  const auto argmin = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());

  QConstants k;
  k.q = q;
  k.bracket_unimodal = sign_changes == 1 && argmin > 0 && argmin + 1 < kGrid;

  double a = 0.0;
  double b = 0.0;
  if (k.bracket_unimodal) {
    a = ys[argmin - 1];
    b = ys[argmin + 1];
  } else {
    constexpr std::size_t kDense = 1'000'000;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 1;
    for (std::size_t i = 1; i < kDense; ++i) {
      const double f = log_g(q, static_cast<double>(i) / kDense);
      if (f < best) {
        best = f;
        best_i = i;
      }
    }
    a = static_cast<double>(best_i - 1) / kDense;
    b = static_cast<double>(best_i + 1) / kDense;
    a = std::max(a, 1e-12);
    b = std::min(b, 1.0 - 1e-12);
  }
  const auto [y, lg] = golden(q, a, b);
  k.y_star = y;
  k.g_star = std::exp(lg);
  k.c_q = 1.0 - lg / std::log(static_cast<double>(q));
  k.C_q = 1.0 + 1.0 / k.c_q;
  if (!(k.c_q > 0.0 && k.c_q < 1.0 && k.C_q > 2.0)) {
    fail(ErrorKind::InvariantViolation, "constants out of range for q = " + std::to_string(q));
  }
  return k;
}

BoundReport eg_bound(const QConstants& k, unsigned n) {
  const double log2_value = n * (1.0 - k.c_q) * std::log2(static_cast<double>(k.q));
  return make_report("eg_bound", {{"q", static_cast<double>(k.q)}, {"n", n}, {"c_q", k.c_q}}, log2_value);
}

std::pair<BoundReport, BoundReport> r3_bounds(double N, double c_upper) {
  require(N >= 3.0 && std::isfinite(N), ErrorKind::DomainError, "r3 bounds need N >= 3");
  require(c_upper > 0.0, ErrorKind::DomainError, "c_upper must be positive");
  const double ln = std::log(N);
  const double log2N = std::log2(N);
  const double lower = log2N + 0.25 * std::log2(ln) - 2.0 * std::sqrt(2.0) * std::sqrt(ln);
  const double upper = log2N - (1.0 + c_upper) * std::log2(ln);
  return {make_report("r3_lower", {{"N", N}}, lower),
          make_report("r3_upper", {{"N", N}, {"c", c_upper}}, upper)};
}

ContainerParams container_params(std::uint64_t q, unsigned n, double s, double beta, double C_q,
                                 std::optional<double> t, double container_constant) {
  require(beta > 0.0, ErrorKind::RangeError, "beta must be positive");
  require(C_q > 2.0, ErrorKind::RangeError, "C_q must exceed 2");
  require(container_constant > 0.0, ErrorKind::RangeError, "container constant must be positive");
  const double c_q = 1.0 / (C_q - 1.0);
  const double s_max = c_q * (1.0 - 3.0 * beta);
  require(s >= 0.0 && s <= s_max, ErrorKind::RangeError,
          "s must lie in [0, c_q(1 - 3 beta)] = [0, " + std::to_string(s_max) + "]");
  const double l2q = std::log2(static_cast<double>(q));
  const double nd = n;

  ContainerParams p;
  p.log2_epsilon = -beta * nd * l2q;
  p.log2_tau = nd / 2.0 * (2.0 * beta - 1.0 + s * (C_q - 1.0)) * l2q;
  p.log2_count_exponent = nd / 2.0 * (1.0 + s * (C_q - 3.0) + 2.0 * beta) * l2q;
  const double n_ln_q = nd * std::log(static_cast<double>(q));
  p.log2_log2_container_count = std::log2(container_constant) + 2.0 * std::log2(n_ln_q) + p.log2_count_exponent;
  if (t) {
    require(*t >= 0.0, ErrorKind::RangeError, "t must be non-negative");
    p.iterations = static_cast<std::uint64_t>(std::ceil(*t * C_q / beta + 1.0));
  }
  p.tau_hypothesis = p.log2_tau < -std::log2(21600.0);
  return p;
}

ContainerHypotheses container_hypotheses(double delta_value, double tau, double epsilon, int r) {
  require(r >= 2 && r <= 10, ErrorKind::DomainError, "uniformity out of supported range");
  double fact = 1.0;
  for (int i = 2; i <= r; ++i) fact *= i;
  ContainerHypotheses h;
  h.tau_limit = 1.0 / (200.0 * r * fact * fact);
  h.delta_limit = epsilon / (12.0 * fact);
  h.tau_ok = tau < h.tau_limit;
  h.delta_ok = delta_value <= h.delta_limit;
  return h;
}

ProbabilityBound probability_bound(std::uint64_t q, unsigned n, double t, double beta, double p_exponent,
                                   double C_q, double c_qbeta) {
  require(beta > 0.0, ErrorKind::RangeError, "beta must be positive");
  require(C_q > 2.0, ErrorKind::RangeError, "C_q must exceed 2");
  require(c_qbeta > 0.0, ErrorKind::RangeError, "c(q, beta) must be positive");
  const double c_q = 1.0 / (C_q - 1.0);
  require(t >= 0.0 && t <= c_q * (1.0 - 3.0 * beta), ErrorKind::RangeError, "t must lie in [0, c_q(1 - 3 beta)]");
  const double floor = -0.5 + t * (C_q - 1.0) / 2.0 - beta / 2.0;
  require(p_exponent <= 0.0 && p_exponent >= floor, ErrorKind::RangeError,
          "p exponent must lie in [" + std::to_string(floor) + ", 0]");

  const double l2q = std::log2(static_cast<double>(q));
  const double nd = n;
  ProbabilityBound b;
  b.log2_m = nd * (p_exponent + 1.0 - t + 2.0 * beta) * l2q;
  const double m = std::exp2(b.log2_m);
  b.log2_container_count =
      nd * nd * c_qbeta * std::exp2(nd * (0.5 + t * (C_q - 3.0) / 2.0 + beta) * l2q);
  // e p S / m collapses to e q^(-2 beta n).
  const double log2_base = kLog2E - 2.0 * beta * nd * l2q;
  b.log2_envelope = m * (1.0 + log2_base);
  if (std::isfinite(b.log2_container_count) && std::isfinite(m)) {
    b.log2_product = b.log2_container_count + m * log2_base;
  } else {
    // Both terms overflow: the sign follows the larger magnitude, compared in log space.
    const double ll_count = std::log2(nd * nd * c_qbeta) + nd * (0.5 + t * (C_q - 3.0) / 2.0 + beta) * l2q;
    const double ll_tail = log2_base == 0.0 ? -kInf : b.log2_m + std::log2(std::abs(log2_base));
    if (ll_count >= ll_tail) {
      b.log2_product = kInf;
    } else {
      b.log2_product = log2_base < 0.0 ? -kInf : kInf;
    }
  }

  const double log2_S = nd * (1.0 - t) * l2q;
  if (b.log2_m <= log2_S && log2_S < 1000.0) {
    const double S = std::exp2(log2_S);
    const double lbinom = std::lgamma(S + 1.0) - std::lgamma(m + 1.0) - std::lgamma(S - m + 1.0);
    b.log2_exact_product = b.log2_container_count + lbinom * kLog2E + m * p_exponent * nd * l2q;
  }

  b.report = make_report("probability_bound",
                         {{"q", static_cast<double>(q)},
                          {"n", nd},
                          {"t", t},
                          {"beta", beta},
                          {"p_exponent", p_exponent},
                          {"C_q", C_q},
                          {"c_q_beta", c_qbeta}},
                         b.log2_product);
  if (!std::isfinite(b.log2_product)) b.report.notes.push_back("log2 value exceeds double range; sign is exact");
  b.report.notes.push_back(
      "admissible range uses t <= c_q(1 - 3 beta) and p floor -1/2 + t(C_q - 1)/2 - beta/2; the headline form "
      "states t < c_q(1 - 2 beta) and omits -beta/2");
  return b;
}

namespace {

double parse_number(std::string_view text, const std::string& spec) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  require(res.ec == std::errc{} && res.ptr == end, ErrorKind::ParseError, "bad number in h spec: " + spec);
  return v;
}

}  // namespace

HFunction HFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  HFunction h;
  if (family == "power") {
    h = power(1.0);
  } else if (family == "logpower") {
    h = log_power(0.0, 1.0);
  } else {
    fail(ErrorKind::ParseError, "unknown h family: " + spec);
  }
  if (colon != std::string::npos) {
    std::string_view rest(spec);
    rest.remove_prefix(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto eq = item.find('=');
      require(eq != std::string_view::npos, ErrorKind::ParseError, "expected key=value in h spec: " + spec);
      const auto key = item.substr(0, eq);
      const double v = parse_number(item.substr(eq + 1), spec);
      if (h.family == Family::Power && key == "a") {
        h.a = v;
      } else if (h.family == Family::Power && key == "k") {
        h.k = v;
      } else if (h.family == Family::LogPower && key == "c") {
        h.c = v;
      } else if (h.family == Family::LogPower && key == "C") {
        h.C = v;
      } else {
        fail(ErrorKind::ParseError, "unknown parameter in h spec: " + spec);
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  if (h.family == Family::Power) {
    require(h.a > 0.0 && h.k > 0.0, ErrorKind::DomainError, "power h needs a > 0 and k > 0");
  } else {
    require(h.c > -1.0 && h.C > 0.0, ErrorKind::DomainError, "logpower h needs c > -1 and C > 0");
  }
  return h;
}

std::string HFunction::describe() const {
  // shortest round-trip form, so parse(describe()) is exact
  auto num = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  if (family == Family::Power) return "power:a=" + num(a) + ",k=" + num(k);
  return "logpower:c=" + num(c) + ",C=" + num(C);
}

double HFunction::operator()(double x) const {
  if (family == Family::Power) return k * std::pow(x, a);
  if (x <= 1.0) return 0.0;
  return std::pow(std::log(x), 1.0 + c) / C;
}

double HFunction::inverse(double y) const {
  if (family == Family::Power) return std::pow(y / k, 1.0 / a);
  return std::exp(std::pow(C * y, 1.0 / (1.0 + c)));
}

double HFunction::log_eval(double log_x) const {
  if (family == Family::Power) return std::log(k) + a * log_x;
  if (log_x <= 0.0) return -std::numeric_limits<double>::infinity();
  return (1.0 + c) * std::log(log_x) - std::log(C);
}

double HFunction::log_inverse(double log_y) const {
  if (family == Family::Power) return (log_y - std::log(k)) / a;
  return std::exp((std::log(C) + log_y) / (1.0 + c));
}

BoundReport varnavides_count(double N, double eta, const HFunction& h) {
  require(eta > 0.0 && eta <= 1.0, ErrorKind::DomainError, "eta must lie in (0, 1]");
  require(N >= 1.0, ErrorKind::DomainError, "N must be at least 1");
  const double log_M = h.log_inverse(std::log(4.0 / eta));
  const double M = std::exp(log_M);
  const double floor_M = std::floor(M);
  if (!(floor_M >= 1.0 && floor_M <= N)) {
    std::ostringstream os;
    os << "floor(h^-1(4/eta)) = " << floor_M << " is outside [1, " << N << "]";
    fail(ErrorKind::PreconditionFailed, os.str());
  }
  const double log2_value = std::log2(eta / 2.0) - 4.0 * log_M * kLog2E + 2.0 * std::log2(N);
  auto r = make_report("varnavides_count", {{"N", N}, {"eta", eta}, {"M", M}}, log2_value);
  r.notes.push_back("h = " + h.describe());
  return r;
}

bool HConditionReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionSweep& c) { return c.passed == c.evaluated; });
}

HConditionReport check_h_conditions(const HFunction& h, double gamma, double log_N_min, double log_N_max,
                                    std::size_t points) {
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::DomainError, "gamma must lie in (0, 1)");
  require(points >= 2 && log_N_max > log_N_min && log_N_min > 0.0, ErrorKind::DomainError,
          "sweep needs 0 < log_N_min < log_N_max and at least two points");

  HConditionReport out;
  for (const char* name : {"h_le_x", "monotone", "technical1", "technical"}) {
    out.conditions.push_back(ConditionSweep{name, 0, 0, std::nullopt, std::nullopt});
  }
  std::vector<bool> all_ok(points, true);
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double L = log_N_min + (log_N_max - log_N_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double hN = h.log_eval(L);
    const double hg = h.log_eval(gamma * L);
    const double inner = L / 5.0 - std::log(1000.0);
    const std::array<bool, 4> ok = {
        hN <= L,
        i == 0 || hN >= prev,
        h.log_eval(inner) >= std::log(4.0) + hg,
        L / 10.0 >= 1.5 * hg + 2.0 * h.log_inverse(std::log(4.0) + hg),
    };
    prev = hN;
    for (std::size_t j = 0; j < ok.size(); ++j) {
      auto& c = out.conditions[j];
      ++c.evaluated;
      if (ok[j]) {
        ++c.passed;
      } else {
        if (!c.first_failure_log_N) c.first_failure_log_N = L;
        c.last_failure_log_N = L;
        all_ok[i] = false;
      }
    }
  }
  for (std::size_t i = points; i-- > 0;) {
    if (!all_ok[i]) break;
    out.threshold_log_N = log_N_min + (log_N_max - log_N_min) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

double thm11_exponent(const QConstants& k) { return 1.0 - 1.0 / (2.0 * (k.C_q - 2.0)); }

double random_p_floor(const QConstants& k, double t) { return -0.5 + t * (k.C_q - 1.0) / 2.0; }

double random_p_floor_restated(const QConstants& k, double t, double beta) {
  return random_p_floor(k, t) - beta / 2.0;
}

double low_energy_delta(const QConstants& k, double eps) { return eps / (2.0 * (k.C_q - 1.0)); }

}  // namespace apfree
