// SPDX-License-Identifier: Apache-2.0

// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when all of them pass.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "apfree/cli.hpp"
#include "apfree/constants.hpp"
#include "apfree/energy.hpp"
#include "apfree/extremal.hpp"
#include "apfree/io.hpp"
#include "apfree/progressions.hpp"
#include "oracles.hpp"

using namespace apfree;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail << "first failure: " << what << "; ";
    pass = pass && cond;
  }
};

struct Ran {
  cli::Outcome outcome;
  double seconds = 0.0;
  [[nodiscard]] json report() const { return json::parse(outcome.outputs.at(0).content); }
  [[nodiscard]] const std::string& file(const std::string& role) const {
    for (const auto& o : outcome.outputs) {
      if (o.role == role) return o.content;
    }
    throw std::runtime_error("missing output " + role);
  }
};

Ran exec(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  Ran r{cli::execute(args, out, err), 0.0};
  r.seconds = since(t0);
  return r;
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

GroundSet range_set(std::uint64_t N) {
  std::vector<std::uint64_t> m;
  for (std::uint64_t i = 1; i <= N; ++i) m.push_back(i);
  return GroundSet::interval(N, m);
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// 1
Verdict constants_criterion() {
  Verdict v;
  const auto r = exec({"constants", "--q", "5"});
  const auto row = r.report()["rows"].at(0);
  const double C = row["C_q"].get<double>();
  const double e = row["thm11_exponent"].get<double>();
  v.require(std::abs(C - 15.12589) <= 1e-3, "C_5 within 1e-3 of 15.12589");
  v.require(std::abs(e - 0.962) <= 1e-3, "thm11 exponent within 1e-3 of 0.962");
  v.require(r.seconds < 1.0, "runtime < 1 s");
  v.detail << "C_5 = " << fmt(C, 8) << ", exponent = " << fmt(e) << ", " << fmt(r.seconds, 3) << " s";
  return v;
}

// 2
Verdict oracle_criterion() {
  Verdict v;
  RngStream rng(20240601, 9);
  const std::vector<GroundSet> bases{range_set(40), GroundSet::full(FieldSpace::make(3, 3)),
                                     GroundSet::full(FieldSpace::make(5, 2))};
  const auto t0 = Clock::now();
  int mismatches = 0;
  for (int t = 0; t < 300; ++t) {
    const auto& base = bases[static_cast<std::size_t>(t) % bases.size()];
    std::vector<std::uint64_t> pool(base.members().begin(), base.members().end());
    const std::size_t size = 1 + rng.bounded(20);
    for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.bounded(pool.size() - i)]);
    pool.resize(size);
    const auto A = base.with_members(pool);
    const auto e = fk_exact(A, 3);
    const auto o = fk_oracle(A, 3);
    certify_witness(A, e);
    certify_witness(A, o);
    if (e.size != o.size || !e.optimal) ++mismatches;
  }
  const double s = since(t0);
  v.require(mismatches == 0, "zero mismatches");
  v.require(s < 300.0, "total runtime < 5 min");
  v.detail << "300 instances, " << mismatches << " mismatches, " << fmt(s, 3) << " s";
  return v;
}

// 3
Verdict known_values_criterion() {
  Verdict v;
  const std::vector<std::tuple<std::string, std::size_t>> cases{{"interval:9", 5}, {"f3^2:full", 4}, {"f3^3:full", 9}};
  for (const auto& [in, want] : cases) {
    const auto r = exec({"extremal", "--in", in, "--k", "3", "--mode", "exact"});
    const auto rep = r.report();
    const auto got = rep["size"].get<std::size_t>();
    v.require(got == want && rep["optimal"] == true, in + " size " + std::to_string(want));
    v.require(r.seconds < 60.0, in + " under 60 s");
    v.detail << in << " -> " << got << " (" << fmt(r.seconds, 3) << " s) ";
  }
  return v;
}

// 4
Verdict counting_criterion() {
  Verdict v;
  int spaces = 0;
  for (std::uint64_t q = 3; q <= 100000; ++q) {
    const auto pp = prime_power(q);
    if (!pp || pp->prime < 3) continue;
    std::uint64_t Q = q;
    for (unsigned n = 1; Q <= 100000; ++n, Q *= q) {
      const auto c = count_3aps(GroundSet::full(FieldSpace::make(q, n)));
      const std::uint64_t want = pp->prime == 3 ? Q * (Q - 1) / 6 : Q * (Q - 1) / 2;
      v.require(c.unordered_nontrivial == want, "F_" + std::to_string(q) + "^" + std::to_string(n));
      ++spaces;
    }
  }
  for (std::uint64_t N = 1; N <= 10000; ++N) {
    std::uint64_t want = 0;
    for (std::uint64_t d = 1; 2 * d < N; ++d) want += N - 2 * d;
    v.require(count_3aps(range_set(N)).unordered_nontrivial == want, "[1.." + std::to_string(N) + "]");
  }
  v.detail << spaces << " field spaces with q^n <= 1e5, intervals N = 1..10000";
  return v;
}

// 5
Verdict energy_criterion() {
  Verdict v;
  for (std::uint64_t N = 1; N <= 100; ++N) {
    const auto A = range_set(N);
    const auto e = energy_profile(A).energy;
    v.require(e == (2 * N * N * N + N) / 3, "E([" + std::to_string(N) + "]) closed form");
    if (N <= 30) v.require(e == oracle::quadruple_energy(A), "quadruple brute force N=" + std::to_string(N));
  }
  RngStream rng(5150, 9);
  int violations = 0;
  const std::vector<GroundSet> bases{range_set(500), GroundSet::full(FieldSpace::make(5, 3)),
                                     GroundSet::full(FieldSpace::make(3, 5))};
  for (int t = 0; t < 1000; ++t) {
    const auto A = oracle::fuzz_subset(bases[static_cast<std::size_t>(t) % 3], rng.next_double(), rng);
    const auto cs = cauchy_schwarz_report(A);
    violations += cs.lhs <= cs.rhs ? 0 : 1;
  }
  v.require(violations == 0, "Cauchy-Schwarz on 1000 sets");
  // Sidon sets by randomized greedy insertion
  int sidon_ok = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint64_t> members;
    std::set<std::uint64_t> sums;
    for (int tries = 0; tries < 400; ++tries) {
      const std::uint64_t x = 1 + rng.bounded(5000);
      std::vector<std::uint64_t> fresh{2 * x};
      bool ok = std::find(members.begin(), members.end(), x) == members.end();
      for (const auto m : members) fresh.push_back(m + x);
      for (const auto s : fresh) ok = ok && sums.count(s) == 0;
      std::set<std::uint64_t> uniq(fresh.begin(), fresh.end());
      ok = ok && uniq.size() == fresh.size();
      if (!ok) continue;
      members.push_back(x);
      sums.insert(fresh.begin(), fresh.end());
    }
    const auto A = GroundSet::interval(5000, members);
    const auto a = static_cast<std::uint64_t>(A.size());
    sidon_ok += energy_profile(A).energy == 2 * a * a - a ? 1 : 0;
  }
  v.require(sidon_ok == 50, "Sidon equality on 50 sets");
  v.detail << "closed form N <= 100, brute force N <= 30, " << violations << " CS violations / 1000, Sidon " << sidon_ok
           << "/50";
  return v;
}

// 6
Verdict thm11_criterion() {
  Verdict v;
  int size_ok = 0, certified = 0, count_ok = 0;
  double slowest = 0.0;
  std::size_t heur_min = SIZE_MAX, heur_max = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = exec({"construct", "--out", "-", "thm11", "--q", "5", "--n", "9", "--seed", std::to_string(seed)});
    const auto rep = r.report();
    slowest = std::max(slowest, r.seconds);
    const auto& dg = rep["diagnostics"];
    const double P = rep["stages"][0]["size"].get<double>();
    size_ok += std::abs(P - 156.25) <= 3 * dg["size_sigma"].get<double>() ? 1 : 0;
    count_ok += dg["four_aps_before"].get<double>() <= 10 * dg["four_ap_reference"].get<double>() ? 1 : 0;
    const auto out = parse_groundset(r.file("groundset")).set;
    const bool cert = rep["certificates"]["four_ap_free"]["holds"] == true && count_4aps(out).unordered_nontrivial == 0 &&
                      out.size() == rep["output_size"].get<std::size_t>();
    certified += cert ? 1 : 0;
    const auto h = rep["f3_heuristic"]["size"].get<std::size_t>();
    heur_min = std::min(heur_min, h);
    heur_max = std::max(heur_max, h);
  }
  v.require(size_ok >= 99, "|P| within 3 sigma in >= 99 runs");
  v.require(certified == 100, "certified 100/100");
  v.require(count_ok >= 95, "4-AP count <= 10 p^4 q^2n in >= 95 runs");
  v.require(slowest < 30.0, "per-seed runtime < 30 s");
  v.detail << "size " << size_ok << "/100, certified " << certified << "/100, count " << count_ok
           << "/100, f3 heuristic " << heur_min << ".." << heur_max << ", slowest " << fmt(slowest, 3) << " s";
  return v;
}

// 7
Verdict annulus_criterion() {
  Verdict v;
  std::ifstream in(std::string(APFREE_TEST_DATA) + "/annulus_calibration.json");
  const auto cal = json::parse(in);
  const auto floor = cal["floor"].get<std::size_t>();
  int certified = 0;
  std::size_t smallest = SIZE_MAX;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = exec({"construct", "--out", "-", "annulus", "--in", "interval:10000", "--seed", std::to_string(seed)});
    const auto rep = r.report();
    slowest = std::max(slowest, r.seconds);
    const auto out = parse_groundset(r.file("groundset")).set;
    const bool cert = rep["certificates"]["three_ap_free"]["holds"] == true && count_3aps(out).unordered_nontrivial == 0;
    certified += cert ? 1 : 0;
    smallest = std::min(smallest, out.size());
    const auto& st = rep["stages"];
    for (std::size_t i = 1; i < st.size(); ++i) {
      v.require(st[i]["size"].get<std::size_t>() <= st[i - 1]["size"].get<std::size_t>(), "stage sizes non-increasing");
    }
  }
  v.require(certified == 20, "certified 20/20");
  v.require(smallest >= floor, "size floor");
  v.require(slowest < 10.0, "per-seed runtime < 10 s");
  v.detail << "certified " << certified << "/20, min size " << smallest << " (floor " << floor << "), slowest "
           << fmt(slowest, 3) << " s";
  return v;
}

// 8
Verdict digits_criterion() {
  Verdict v;
  const auto r = exec({"construct", "--out", "-", "digits6", "--N", "100000"});
  const auto rep = r.report();
  const auto out = parse_groundset(r.file("groundset")).set;
  const auto c = count_4aps(out);
  v.require(rep["certificates"]["four_ap_free"]["holds"] == true, "certificate");
  v.require(c.unordered_nontrivial == 0, "exhaustive recount");
  v.require(r.seconds < 10.0, "runtime < 10 s");
  v.detail << "|A| = " << out.size() << ", 4-APs = " << c.unordered_nontrivial << ", " << fmt(r.seconds, 3) << " s";
  return v;
}

// 9
Verdict supersat_criterion() {
  Verdict v;
  const auto f = exec({"supersat", "--seed", "1", "--trials", "20", "fqn", "--q", "3", "--n", "8", "--s", "0,0.01,0.02"}).report();
  const auto w = exec({"supersat", "--seed", "1", "--trials", "20", "varnavides", "--N", "10000", "--eta", "0.2,0.5,1",
                       "--h-spec", "logpower:c=0.1,C=0.5"})
                     .report();
  int fp = 0, wp = 0;
  double fmin = INFINITY, wmin = INFINITY;
  for (const auto& row : f["rows"]) {
    const bool ok = row["measured_count"].get<double>() >= row["predicted_lower_bound"].get<double>();
    fp += ok ? 1 : 0;
    fmin = std::min(fmin, row["ratio"].get<double>());
  }
  for (const auto& row : w["rows"]) {
    const bool ok = row["measured_count"].get<double>() >= row["predicted_lower_bound"].get<double>();
    wp += ok ? 1 : 0;
    wmin = std::min(wmin, row["ratio"].get<double>());
  }
  v.require(f["rows"].size() == 60 && fp == 60, "F_3^8 60/60");
  v.require(w["rows"].size() == 60 && wp == 60, "Varnavides 60/60");
  v.detail << "F_3^8 " << fp << "/60 (min ratio " << fmt(fmin, 4) << "), Varnavides " << wp << "/60 (min ratio "
           << fmt(wmin, 4) << ")";
  return v;
}

// 10
Verdict determinism_criterion() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / ("apfree-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> commands{
      {"construct", "--out", p("thm11.gs"), "thm11", "--q", "5", "--n", "9", "--seed", "11"},
      {"construct", "--out", p("low.gs"), "lowenergy", "--q", "3", "--n", "10", "--eps", "0.5", "--seed", "11"},
      {"construct", "--out", p("ann.gs"), "annulus", "--in", "interval:10000", "--seed", "11"},
      {"construct", "--out", p("rand.gs"), "random", "--in", "f5^5:full", "--p", "0.05", "--seed", "11", "--delete", "4"},
      {"supersat", "--seed", "11", "--trials", "5", "fqn", "--q", "3", "--n", "8", "--s", "0,0.02"},
      {"supersat", "--seed", "11", "--trials", "5", "varnavides", "--N", "10000", "--eta", "0.5"},
      {"extremal", "--in", "interval:40", "--mode", "heuristic", "--seed", "11", "--iters", "50", "--witness", p("w.gs")},
      {"analyze", "--in", p("ann.gs"), "energy"},
  };
  int replayed = 0, threaded = 0, i = 0;
  for (const auto& c : commands) {
    const auto manifest = p("m" + std::to_string(i) + ".json");
    std::vector<std::string> args{"--report", p("r" + std::to_string(i) + ".json"), "--manifest", manifest};
    ++i;
    args.insert(args.end(), c.begin(), c.end());
    v.require(run_cli(args) == 0, "initial run of " + c[0] + " " + c[1]);
    const bool one = run_cli({"replay", "--from", manifest}) == 0;
    const bool four = run_cli({"--threads", "4", "replay", "--from", manifest}) == 0;
    replayed += one ? 1 : 0;
    threaded += four ? 1 : 0;
    v.require(one, "replay of " + c[0] + " " + c[1]);
    v.require(four, "--threads 4 replay of " + c[0] + " " + c[1]);
  }
  fs::remove_all(dir);
  v.detail << commands.size() << " seeded commands, byte-identical replays " << replayed << "/" << commands.size()
           << ", under --threads 4 " << threaded << "/" << commands.size();
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"constants", constants_criterion},         {"oracle equivalence", oracle_criterion},
      {"known extremal values", known_values_criterion}, {"counting identities", counting_criterion},
      {"energy", energy_criterion},               {"4-AP-free pipeline", thm11_criterion},
      {"annulus construction", annulus_criterion}, {"base-6 digits", digits_criterion},
      {"supersaturation", supersat_criterion},     {"determinism", determinism_criterion},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << v.detail.str() << " ("
              << fmt(since(t0), 3) << " s total)" << std::endl;
  }
  std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
