// SPDX-License-Identifier: Apache-2.0

#include "apfree/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "apfree/errors.hpp"
#include "apfree/io.hpp"
#include "apfree/report.hpp"

namespace apfree::cli {

namespace {

using Json = nlohmann::json;
using Handler = std::function<void(Outcome&)>;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

void record_input(Outcome& o, const std::string& spec, const InputSpec& in) {
  o.inputs.push_back({{"spec", spec}, {"path", in.from_file ? Json(in.path) : Json(nullptr)},
                      {"sha256", in.from_file ? Json(in.digest) : Json(nullptr)}});
}

// '#' lines for a constructed set.
std::vector<std::string> groundset_metadata(const ConstructionReport& r) {
  std::vector<std::string> meta{"construction " + r.name};
  if (r.three_ap_free && r.three_ap_free->holds) meta.emplace_back("certified 3ap_free exhaustive");
  if (r.four_ap_free && r.four_ap_free->holds) meta.emplace_back("certified 4ap_free exhaustive");
  if (r.parameters.contains("seed")) {
    meta.push_back("generator " + std::string(kGeneratorId) + " seed=" + std::to_string(r.parameters["seed"].get<std::uint64_t>()));
  }
  return meta;
}

Json collect_params(CLI::App* app) {
  Json params = Json::object();
  for (CLI::App* cur = app; cur != nullptr;) {
    for (const CLI::Option* opt : cur->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name.empty()) continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        params[name] = res.size() == 1 ? Json(res[0]) : Json(res);
      } else if (!opt->get_default_str().empty()) {
        params[name] = opt->get_default_str();
      }
    }
    const auto subs = cur->get_subcommands();
    cur = subs.empty() ? nullptr : subs.front();
  }
  return params;
}

std::string command_path(CLI::App* app) {
  std::string path;
  for (CLI::App* cur = app; cur != nullptr;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    if (!path.empty()) path += ' ';
    path += cur->get_name();
  }
  return path;
}

class NullBuffer : public std::streambuf {
 protected:
  int overflow(int c) override { return c; }
};

}  // namespace

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::BudgetExhausted:
        return kBudget;
      case ErrorKind::InvariantViolation:
        return kInvariant;
      default:
        return kUsage;
    }
  }
  return kInvariant;
}

Outcome execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic-progression structures in [1..N] and F_q^n", "apfree"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  unsigned threads = 1;
  std::string report_path;
  std::string manifest_path;
  std::string format = "json";
  app.add_option("--threads", threads, "Worker threads for counting and trial loops")
      ->capture_default_str()
      ->check(CLI::Range(1U, 256U))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--report", report_path, "Write the JSON/CSV report here instead of stdout");
  app.add_option("--manifest", manifest_path, "Write the experiment manifest here");
  app.add_option("--format", format, "Report format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));

  std::map<CLI::App*, Handler> handlers;
  bool csv_ok = false;

  // ---- constants
  std::vector<std::uint64_t> const_q;
  auto* constants = app.add_subcommand("constants", "c_q, C_q and the 4-AP-free construction exponent");
  constants->add_option("--q", const_q, "Prime powers, comma separated")->required()->delimiter(',');
  handlers[constants] = [&](Outcome& o) {
    Json rows = Json::array();
    std::string csv = "q,y_star,g_star,c_q,C_q,thm11_exponent\n";
    for (const auto q : const_q) {
      const QConstants k = compute_constants(q);
      rows.push_back(to_json(k));
      csv += std::to_string(q) + "," + csv_number(k.y_star) + "," + csv_number(k.g_star) + "," + csv_number(k.c_q) +
             "," + csv_number(k.C_q) + "," + csv_number(thm11_exponent(k)) + "\n";
    }
    o.outputs[0].content = format == "csv" ? csv : dump({{"command", "constants"}, {"rows", rows}});
  };

  // ---- bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds in log space");
  bounds->require_subcommand(1);
  std::uint64_t b_q = 3;
  unsigned b_n = 1;
  double b_N = 0.0;
  double b_lnN = 0.0;
  double b_c = 0.1;
  double b_s = 0.0;
  double b_beta = 0.0;
  double b_t = 0.0;
  double b_p_exp = 0.0;
  double b_c_qbeta = 1.0;
  double b_c3 = kContainerConstant;
  double b_eta = 1.0;
  double b_gamma = 0.01;
  double b_eps = 0.5;
  double b_ln_min = 1.0;
  double b_ln_max = 1000.0;
  std::size_t b_points = 200;
  std::string b_h = "logpower:c=0.1,C=1";

  auto* b_eg = bounds->add_subcommand("eg", "f_3(F_q^n) <= q^(n(1 - c_q))");
  b_eg->add_option("--q", b_q)->required();
  b_eg->add_option("--n", b_n)->required();
  handlers[b_eg] = [&](Outcome& o) {
    o.outputs[0].content = dump({{"command", "bounds eg"}, {"bound", to_json(eg_bound(compute_constants(b_q), b_n))}});
  };

  auto* b_r3 = bounds->add_subcommand("r3", "Lower and upper bounds on r_3(N)");
  auto* r3_N = b_r3->add_option("--N", b_N, "N");
  auto* r3_ln = b_r3->add_option("--lnN", b_lnN, "ln N, for N beyond double range of interest");
  r3_N->excludes(r3_ln);
  b_r3->add_option("--c", b_c, "Exponent constant of the upper bound")->capture_default_str();
  handlers[b_r3] = [&](Outcome& o) {
    require(r3_N->count() + r3_ln->count() == 1, ErrorKind::InvalidArgument, "give exactly one of --N or --lnN");
    const double N = r3_N->count() > 0 ? b_N : std::exp(b_lnN);
    const auto [lo, hi] = r3_bounds(N, b_c);
    o.outputs[0].content = dump({{"command", "bounds r3"}, {"lower", to_json(lo)}, {"upper", to_json(hi)}});
  };

  auto* b_cont = bounds->add_subcommand("container", "Container-lemma parameters");
  b_cont->add_option("--q", b_q)->required();
  b_cont->add_option("--n", b_n)->required();
  b_cont->add_option("--s", b_s)->required();
  b_cont->add_option("--beta", b_beta)->required();
  auto* cont_t = b_cont->add_option("--t", b_t, "Iteration target t");
  b_cont->add_option("--c3", b_c3, "Container constant c(3)")->capture_default_str();
  handlers[b_cont] = [&](Outcome& o) {
    const QConstants k = compute_constants(b_q);
    const auto p = container_params(b_q, b_n, b_s, b_beta, k.C_q,
                                    cont_t->count() > 0 ? std::optional<double>(b_t) : std::nullopt, b_c3);
    o.outputs[0].content = dump({{"command", "bounds container"}, {"C_q", k.C_q}, {"params", to_json(p)}});
  };

  auto* b_prob = bounds->add_subcommand("probability", "Union bound over containers for p = q^(n p_exp)");
  b_prob->add_option("--q", b_q)->required();
  b_prob->add_option("--n", b_n)->required();
  b_prob->add_option("--t", b_t)->required();
  b_prob->add_option("--beta", b_beta)->required();
  b_prob->add_option("--p-exp", b_p_exp, "p = q^(n * p_exp)")->required();
  b_prob->add_option("--c-qbeta", b_c_qbeta, "Constant c(q, beta) of the container count")->capture_default_str();
  handlers[b_prob] = [&](Outcome& o) {
    const QConstants k = compute_constants(b_q);
    const auto b = probability_bound(b_q, b_n, b_t, b_beta, b_p_exp, k.C_q, b_c_qbeta);
    o.outputs[0].content = dump({{"command", "bounds probability"}, {"C_q", k.C_q}, {"bound", to_json(b)}});
  };

  auto* b_var = bounds->add_subcommand("varnavides", "Guaranteed 3-AP count in dense subsets of [N]");
  b_var->add_option("--N", b_N)->required();
  b_var->add_option("--eta", b_eta)->required();
  b_var->add_option("--h-spec", b_h, "power:a=..,k=.. or logpower:c=..,C=..")->capture_default_str();
  handlers[b_var] = [&](Outcome& o) {
    const auto r = varnavides_count(b_N, b_eta, HFunction::parse(b_h));
    o.outputs[0].content = dump({{"command", "bounds varnavides"}, {"bound", to_json(r)}});
  };

  auto* b_hc = bounds->add_subcommand("hcheck", "Conditions on h over a sweep of ln N");
  b_hc->add_option("--h-spec", b_h)->capture_default_str();
  b_hc->add_option("--gamma", b_gamma)->capture_default_str();
  b_hc->add_option("--lnN-min", b_ln_min)->capture_default_str();
  b_hc->add_option("--lnN-max", b_ln_max)->capture_default_str();
  b_hc->add_option("--points", b_points)->capture_default_str();
  handlers[b_hc] = [&](Outcome& o) {
    const HFunction h = HFunction::parse(b_h);
    const auto r = check_h_conditions(h, b_gamma, b_ln_min, b_ln_max, b_points);
    o.outputs[0].content = dump({{"command", "bounds hcheck"}, {"h", h.describe()}, {"report", to_json(r)}});
  };

  auto* b_exp = bounds->add_subcommand("exponents", "Exponents derived from C_q");
  b_exp->add_option("--q", b_q)->required();
  b_exp->add_option("--t", b_t)->capture_default_str();
  b_exp->add_option("--beta", b_beta)->capture_default_str();
  b_exp->add_option("--eps", b_eps)->capture_default_str();
  handlers[b_exp] = [&](Outcome& o) {
    const QConstants k = compute_constants(b_q);
    o.outputs[0].content = dump({{"command", "bounds exponents"},
                                 {"constants", to_json(k)},
                                 {"thm11", thm11_exponent(k)},
                                 {"random_p_floor", random_p_floor(k, b_t)},
                                 {"random_p_floor_restated", random_p_floor_restated(k, b_t, b_beta)},
                                 {"low_energy_delta", low_energy_delta(k, b_eps)}});
  };

  // ---- construct
  auto* construct = app.add_subcommand("construct", "Build and certify progression-free sets");
  construct->require_subcommand(1);
  std::string c_out;
  std::string c_in;
  std::uint64_t c_seed = 0;
  std::uint64_t c_q = 5;
  unsigned c_n = 1;
  double c_eps = 0.5;
  std::uint64_t c_N = 1;
  double c_p = 0.5;
  int c_k = 4;
  int c_delete = 0;
  std::string c_strategy = "canonical";
  unsigned c_d = 0;
  double c_delta = 0.0;
  double c_cprime = 1.0;
  std::uint64_t c_iters = 20;
  construct->add_option("--out", c_out, "GroundSet output file");

  auto finish_construction = [&](Outcome& o, const ConstructionReport& r, Json extra = Json::object()) {
    const std::string text = format_groundset(r.output, groundset_metadata(r));
    Json report = to_json(r, sha256_hex(text));
    report["command"] = "construct " + r.name;
    for (auto& [key, v] : extra.items()) report[key] = v;
    o.outputs[0].content = dump(report);
    o.timings["stages"] = stage_timings(r.stages);
    if (!c_out.empty()) o.outputs.push_back({"groundset", c_out, text});
  };

  auto* k_thm11 = construct->add_subcommand("thm11", "Random subset at p = q^(-n/3)/100, then 4-AP deletion");
  k_thm11->add_option("--q", c_q)->required();
  k_thm11->add_option("--n", c_n)->required();
  k_thm11->add_option("--seed", c_seed)->required();
  k_thm11->add_option("--heuristic-iters", c_iters, "Restarts for the f_3 lower bound on the output")->capture_default_str();
  handlers[k_thm11] = [&](Outcome& o) {
    const auto r = pipeline_thm11(FieldSpace::make(c_q, c_n), c_seed, Exec{threads});
    Json extra = Json::object();
    if (c_iters > 0 && !r.output.empty()) {
      const auto h = fk_heuristic(r.output, 3, c_iters, c_seed);
      extra["f3_heuristic"] = {{"size", h.size}, {"iters", c_iters}};
    }
    finish_construction(o, r, extra);
  };

  auto* k_low = construct->add_subcommand("lowenergy", "Random subset at p = q^(n(-1/2 + eps/(4 - 2 eps)))");
  k_low->add_option("--q", c_q)->required();
  k_low->add_option("--n", c_n)->required();
  k_low->add_option("--eps", c_eps)->required();
  k_low->add_option("--seed", c_seed)->required();
  handlers[k_low] = [&](Outcome& o) {
    finish_construction(o, pipeline_lowenergy(FieldSpace::make(c_q, c_n), c_eps, c_seed, Exec{threads}));
  };

  auto* k_ann = construct->add_subcommand("annulus", "Torus-shell projection to a 3-AP-free subset");
  k_ann->add_option("--in", c_in, "interval:N or GroundSet file")->required();
  k_ann->add_option("--seed", c_seed)->required();
  auto* ann_d = k_ann->add_option("--d", c_d, "Torus dimension");
  auto* ann_delta = k_ann->add_option("--delta", c_delta, "Shell thickness");
  k_ann->add_option("--c-prime", c_cprime, "Constant in the default delta")->capture_default_str();
  k_ann->add_option("--strategy", c_strategy)->capture_default_str()->check(CLI::IsMember({"canonical", "greedy"}));
  handlers[k_ann] = [&](Outcome& o) {
    const InputSpec in = load_input(c_in);
    record_input(o, c_in, in);
    const auto r = annulus_construct(in.file.set, c_seed, ann_d->count() > 0 ? std::optional<unsigned>(c_d) : std::nullopt,
                                     ann_delta->count() > 0 ? std::optional<double>(c_delta) : std::nullopt, c_cprime,
                                     parse_strategy(c_strategy), Exec{threads});
    finish_construction(o, r);
  };

  auto* k_dig = construct->add_subcommand("digits6", "Members of [1, N] with base-6 digits in {0, 1, 2}");
  k_dig->add_option("--N", c_N)->required();
  handlers[k_dig] = [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    ConstructionReport r;
    r.name = "digits6";
    r.parameters = {{"N", c_N}};
    r.output = digits_base6(c_N);
    const double build = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.stages.push_back({"built", r.output.size(), build});
    const auto t1 = std::chrono::steady_clock::now();
    const APCounts c = count_4aps(r.output, Exec{threads});
    require(c.unordered_nontrivial == 0, ErrorKind::InvariantViolation, "digits set contains a 4-AP");
    r.four_ap_free = Certificate{true, "exhaustive count_4aps = 0"};
    r.diagnostics = {{"three_aps", count_3aps(r.output, Exec{threads}).unordered_nontrivial}};
    r.stages.push_back(
        {"certified", r.output.size(), std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count()});
    finish_construction(o, r);
  };

  auto* k_rand = construct->add_subcommand("random", "Bernoulli(p) subset of the input, optionally with k-AP deletion");
  k_rand->add_option("--in", c_in)->required();
  k_rand->add_option("--p", c_p)->required();
  k_rand->add_option("--seed", c_seed)->required();
  k_rand->add_option("--delete", c_delete, "0 (none), 3 or 4")->capture_default_str()->check(CLI::IsMember({0, 3, 4}));
  k_rand->add_option("--strategy", c_strategy)->capture_default_str()->check(CLI::IsMember({"canonical", "greedy"}));
  handlers[k_rand] = [&](Outcome& o) {
    const InputSpec in = load_input(c_in);
    record_input(o, c_in, in);
    const GroundSet& base = in.file.set;
    const auto t0 = std::chrono::steady_clock::now();
    const GroundSet universe = random_subset(base.ambient(), RandomModel{c_p, c_seed}, Exec{threads});
    std::vector<std::uint64_t> kept;
    for (const auto x : universe.members()) {
      if (base.contains(x)) kept.push_back(x);
    }
    const GroundSet sample = base.with_members(std::move(kept));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ConstructionReport r;
    if (c_delete == 0) {
      r.output = sample;
    } else {
      r = c_delete == 3 ? remove_3aps(sample, parse_strategy(c_strategy), Exec{threads})
                        : remove_4aps(sample, parse_strategy(c_strategy), Exec{threads});
      r.stages.erase(r.stages.begin());
    }
    r.stages.insert(r.stages.begin(), Stage{"sampled", sample.size(), secs});
    r.name = "random";
    r.parameters = {{"p", c_p}, {"seed", c_seed}, {"generator", std::string(kGeneratorId)}, {"delete", c_delete},
                    {"strategy", c_strategy}, {"input_size", base.size()}};
    finish_construction(o, r);
  };

  auto* k_rem = construct->add_subcommand("remove", "Delete one member of every k-AP of the input");
  k_rem->add_option("--in", c_in)->required();
  k_rem->add_option("--k", c_k)->capture_default_str()->check(CLI::IsMember({3, 4}));
  k_rem->add_option("--strategy", c_strategy)->capture_default_str()->check(CLI::IsMember({"canonical", "greedy"}));
  handlers[k_rem] = [&](Outcome& o) {
    const InputSpec in = load_input(c_in);
    record_input(o, c_in, in);
    const auto strategy = parse_strategy(c_strategy);
    finish_construction(o, c_k == 3 ? remove_3aps(in.file.set, strategy, Exec{threads})
                                    : remove_4aps(in.file.set, strategy, Exec{threads}));
  };

  // ---- analyze
  auto* analyze = app.add_subcommand("analyze", "Counts, hypergraph statistics, energy, supersaturation of a set");
  analyze->require_subcommand(1);
  std::string a_in;
  std::vector<int> a_k;
  std::vector<double> a_tau;
  std::string a_h = "logpower:c=0.1,C=0.5";
  analyze->add_option("--in", a_in, "interval:N, f<q>^<n>:full or GroundSet file")->required();

  auto load_a = [&](Outcome& o) {
    InputSpec in = load_input(a_in);
    record_input(o, a_in, in);
    return std::move(in.file.set);
  };

  auto* a_counts = analyze->add_subcommand("counts", "Nontrivial k-AP counts");
  a_counts->add_option("--k", a_k, "Progression lengths (default: every supported k in {3, 4})")->delimiter(',');
  handlers[a_counts] = [&](Outcome& o) {
    const GroundSet set = load_a(o);
    std::vector<int> ks = a_k;
    if (ks.empty()) {
      for (const int k : {3, 4}) {
        if (set.is_interval() || set.space()->supports_progressions(k)) ks.push_back(k);
      }
    }
    Json counts = Json::array();
    for (const int k : ks) counts.push_back(to_json(count_kaps(set, k, Exec{threads})));
    o.outputs[0].content = dump({{"command", "analyze counts"},
                                 {"ambient", ambient_json(set)},
                                 {"size", set.size()},
                                 {"counts", counts}});
  };

  auto* a_hyp = analyze->add_subcommand("hypergraph", "3-AP hypergraph degrees and Delta(H, tau)");
  a_hyp->add_option("--tau", a_tau, "tau values")->delimiter(',');
  handlers[a_hyp] = [&](Outcome& o) {
    const GroundSet set = load_a(o);
    const APHypergraph h = build_hypergraph(set);
    Json deltas = Json::array();
    for (const double tau : a_tau) {
      deltas.push_back({{"tau", tau}, {"value", h.edges.empty() ? Json(nullptr) : Json(delta_function(h, tau))}});
    }
    o.outputs[0].content = dump({{"command", "analyze hypergraph"},
                                 {"ambient", ambient_json(set)},
                                 {"size", set.size()},
                                 {"hypergraph", to_json(h)},
                                 {"delta_function", deltas}});
  };

  auto* a_en = analyze->add_subcommand("energy", "Additive energy, T(A) and Cauchy-Schwarz");
  handlers[a_en] = [&](Outcome& o) {
    const GroundSet set = load_a(o);
    const EnergyProfile e = energy_profile(set, Exec{threads});
    const std::uint64_t by_diff = energy_by_differences(set);
    require(by_diff == e.energy, ErrorKind::InvariantViolation, "sum and difference energies disagree");
    Json report = {{"command", "analyze energy"},
                   {"ambient", ambient_json(set)},
                   {"energy", to_json(e)},
                   {"energy_by_differences", by_diff},
                   {"cauchy_schwarz", to_json(cauchy_schwarz_report(e))},
                   {"energy_exponent", set.size() >= 2 ? Json(energy_exponent(e)) : Json(nullptr)}};
    o.outputs[0].content = dump(report);
  };

  auto* a_sup = analyze->add_subcommand("supersat", "Measured 3-APs against the supersaturation bounds");
  a_sup->add_option("--h-spec", a_h, "h for interval ambients")->capture_default_str();
  handlers[a_sup] = [&](Outcome& o) {
    const GroundSet set = load_a(o);
    require(!set.empty(), ErrorKind::RangeError, "empty set");
    const APCounts c = count_3aps(set, Exec{threads});
    Json report = {{"command", "analyze supersat"}, {"ambient", ambient_json(set)}, {"size", set.size()},
                   {"counts", to_json(c)}};
    if (set.is_interval()) {
      const double N = static_cast<double>(std::get<Interval>(set.ambient()).N);
      const double eta = static_cast<double>(set.size()) / N;
      const auto b = varnavides_count(N, eta, HFunction::parse(a_h));
      report["eta"] = eta;
      report["bound"] = to_json(b);
      report["pass"] = static_cast<double>(c.unordered_nontrivial) >= std::exp2(b.log2_value);
    } else {
      const QConstants k = compute_constants(set.space()->q());
      const double Q = static_cast<double>(set.universe_size());
      const double s = 1.0 - std::log(static_cast<double>(set.size())) / std::log(Q);
      require(s < k.c_q, ErrorKind::RangeError, "s = " + std::to_string(s) + " is not below c_q");
      const double bound = std::pow(1.0 / (6.0 * std::pow(Q, std::max(s, 0.0))), k.C_q) * Q * Q;
      const std::uint64_t triangles = c.ordered_nontrivial + set.size();
      report["s"] = s;
      report["triangles"] = triangles;
      report["bound"] = bound;
      report["pass"] = static_cast<double>(triangles) >= bound;
    }
    o.outputs[0].content = dump(report);
  };

  // ---- extremal
  auto* extremal = app.add_subcommand("extremal", "Largest k-AP-free subset");
  std::string e_in;
  int e_k = 3;
  std::string e_mode = "exact";
  std::uint64_t e_budget = kDefaultBudget;
  std::uint64_t e_seed = 0;
  std::uint64_t e_iters = 200;
  std::string e_tie = "smallest";
  std::string e_witness;
  extremal->add_option("--in", e_in)->required();
  extremal->add_option("--k", e_k)->capture_default_str()->check(CLI::IsMember({3, 4}));
  extremal->add_option("--mode", e_mode)->capture_default_str()->check(CLI::IsMember({"exact", "oracle", "heuristic"}));
  extremal->add_option("--budget", e_budget, "Node limit for exact search")->capture_default_str();
  extremal->add_option("--seed", e_seed, "Heuristic seed")->capture_default_str();
  extremal->add_option("--iters", e_iters, "Heuristic restarts")->capture_default_str();
  extremal->add_option("--tie", e_tie, "Exact-search branching tie-break")
      ->capture_default_str()
      ->check(CLI::IsMember({"smallest", "largest"}));
  extremal->add_option("--witness", e_witness, "Write the witness as a GroundSet file");
  handlers[extremal] = [&](Outcome& o) {
    InputSpec in = load_input(e_in);
    record_input(o, e_in, in);
    const GroundSet& set = in.file.set;
    ExtremalResult r;
    if (e_mode == "exact") {
      r = fk_exact(set, e_k, e_budget, e_tie == "largest" ? TieBreak::Largest : TieBreak::Smallest);
    } else if (e_mode == "oracle") {
      r = fk_oracle(set, e_k);
    } else {
      r = fk_heuristic(set, e_k, e_iters, e_seed);
    }
    certify_witness(set, r);
    Json report = to_json(r);
    report["command"] = "extremal";
    report["input_size"] = set.size();
    o.outputs[0].content = dump(report);
    if (!e_witness.empty()) {
      std::vector<std::string> meta{"witness f" + std::to_string(e_k) + " mode=" + e_mode,
                                    "certified " + std::to_string(e_k) + "ap_free exhaustive"};
      o.outputs.push_back({"witness", e_witness, format_groundset(r.witness, meta)});
    }
    if (r.budget_exhausted) o.exit_code = kBudget;
  };

  // ---- supersat
  auto* supersat = app.add_subcommand("supersat", "Random-set trials against supersaturation bounds");
  supersat->require_subcommand(1);
  std::uint64_t s_trials = 20;
  std::uint64_t s_seed = 0;
  std::uint64_t s_q = 3;
  unsigned s_n = 8;
  std::vector<double> s_grid;
  std::uint64_t s_N = 10000;
  std::vector<double> s_eta;
  std::string s_h = "logpower:c=0.1,C=0.5";
  supersat->add_option("--trials", s_trials)->capture_default_str();
  supersat->add_option("--seed", s_seed)->required();

  auto supersat_out = [&](Outcome& o, const std::string& name, const std::vector<SupersatReport>& rows) {
    Json arr = Json::array();
    std::size_t passed = 0;
    std::string csv = name == "fqn" ? "q,n,s,trial,trial_seed,set_size,measured_count,predicted_lower_bound,ratio,pass\n"
                                    : "N,eta,trial,trial_seed,set_size,measured_count,predicted_lower_bound,ratio,pass\n";
    for (const auto& r : rows) {
      arr.push_back(to_json(r));
      passed += r.pass ? 1 : 0;
      const std::string tail = std::to_string(r.trial) + "," + std::to_string(r.trial_seed) + "," +
                               std::to_string(r.set_size) + "," + std::to_string(r.measured_count) + "," +
                               csv_number(r.predicted_lower_bound) + "," + csv_number(r.ratio) + "," +
                               (r.pass ? "1" : "0") + "\n";
      csv += name == "fqn" ? std::to_string(r.q) + "," + std::to_string(r.n) + "," + csv_number(r.s) + "," + tail
                           : std::to_string(r.N) + "," + csv_number(r.eta) + "," + tail;
    }
    o.outputs[0].content = format == "csv" ? csv
                                           : dump({{"command", "supersat " + name},
                                                   {"rows", arr},
                                                   {"passed", passed},
                                                   {"total", rows.size()}});
  };

  auto* s_fqn = supersat->add_subcommand("fqn", "Uniform subsets of F_q^n of size q^(n(1-s))");
  s_fqn->add_option("--q", s_q)->required();
  s_fqn->add_option("--n", s_n)->required();
  s_fqn->add_option("--s", s_grid, "s values")->required()->delimiter(',');
  handlers[s_fqn] = [&](Outcome& o) {
    supersat_out(o, "fqn", verify_fqn_supersaturation(s_q, s_n, s_grid, s_trials, s_seed, Exec{threads}));
  };

  auto* s_var = supersat->add_subcommand("varnavides", "Uniform subsets of [N] of size eta N");
  s_var->add_option("--N", s_N)->required();
  s_var->add_option("--eta", s_eta, "eta values")->required()->delimiter(',');
  s_var->add_option("--h-spec", s_h)->capture_default_str();
  handlers[s_var] = [&](Outcome& o) {
    supersat_out(o, "varnavides", verify_varnavides(s_N, s_eta, HFunction::parse(s_h), s_trials, s_seed, Exec{threads}));
  };

  // ---- replay
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  std::string r_manifest;
  replay->add_option("--from", r_manifest, "Manifest to replay")->required();
  handlers[replay] = [&](Outcome& o) {
    const Json m = Json::parse(read_file(r_manifest));
    std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
    const auto* thr = app.get_option("--threads");
    if (thr->count() > 0) {
      argv.emplace_back("--threads");
      argv.push_back(std::to_string(threads));
    }
    Json checks = Json::array();
    bool all = true;
    for (const auto& in : m.at("inputs")) {
      if (in.at("path").is_null()) continue;
      const std::string actual = sha256_hex(read_file(in.at("path").get<std::string>()));
      const bool ok = actual == in.at("sha256").get<std::string>();
      all = all && ok;
      checks.push_back({{"role", "input"}, {"path", in.at("path")}, {"expected", in.at("sha256")}, {"actual", actual},
                        {"match", ok}});
    }
    NullBuffer nb;
    std::ostream sink(&nb);
    const Outcome again = execute(argv, sink, sink);
    for (const auto& expected : m.at("outputs")) {
      const std::string role = expected.at("role").get<std::string>();
      std::string actual;
      for (const auto& f : again.outputs) {
        if (f.role == role) actual = sha256_hex(f.content);
      }
      const bool ok = actual == expected.at("sha256").get<std::string>();
      all = all && ok;
      checks.push_back({{"role", role}, {"expected", expected.at("sha256")}, {"actual", actual}, {"match", ok}});
    }
    o.outputs[0].content = dump({{"command", "replay"},
                                 {"manifest", r_manifest},
                                 {"replayed_command", m.at("command")},
                                 {"threads", again.threads},
                                 {"match", all},
                                 {"checks", checks}});
    if (!all) o.exit_code = kInvariant;
  };

  Outcome o;
  o.argv = args;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    o.help_only = true;
    o.exit_code = app.exit(e, out, err) == 0 ? kOk : kUsage;
    return o;
  }

  CLI::App* leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  o.command = command_path(&app);
  o.params = collect_params(&app);
  o.threads = threads;
  o.manifest_path = manifest_path;
  csv_ok = leaf == constants || leaf == s_fqn || leaf == s_var;
  require(format == "json" || csv_ok, ErrorKind::InvalidArgument, "--format csv is only available for tables");
  for (const char* key : {"seed"}) {
    if (o.params.contains(key)) o.seeds.push_back(std::stoull(o.params[key].get<std::string>()));
  }
  o.outputs.push_back({"report", report_path.empty() ? "-" : report_path, ""});

  const auto it = handlers.find(leaf);
  require(it != handlers.end(), ErrorKind::InvalidArgument, "no command selected");
  const auto t0 = std::chrono::steady_clock::now();
  it->second(o);
  o.timings["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

Json manifest_json(const Outcome& o) {
  Json outputs = Json::array();
  for (const auto& f : o.outputs) outputs.push_back({{"role", f.role}, {"path", f.path}, {"sha256", sha256_hex(f.content)}});
  return {{"schema", "apfree-manifest/1"},
          {"tool", "apfree"},
          {"version", kVersion},
          {"command", o.command},
          {"argv", o.argv},
          {"params", o.params},
          {"seeds", o.seeds},
          {"generator_id", std::string(kGeneratorId)},
          {"threads", o.threads},
          {"timings", o.timings},
          {"inputs", o.inputs},
          {"outputs", outputs},
          {"exit_code", o.exit_code}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    o = execute(args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  if (o.help_only) return o.exit_code;
  try {
    for (std::size_t i = 1; i < o.outputs.size(); ++i) write_file(o.outputs[i].path, o.outputs[i].content);
    const auto& report = o.outputs[0];
    if (report.path == "-") {
      out << report.content;
      out.flush();
    } else {
      write_file(report.path, report.content);
    }
    if (!o.manifest_path.empty()) write_file(o.manifest_path, dump(manifest_json(o)));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return o.exit_code;
}

}  // namespace apfree::cli
