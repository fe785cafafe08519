// SPDX-License-Identifier: Apache-2.0

#include "apfree/report.hpp"

namespace apfree {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json certificate(const std::optional<Certificate>& c) {
  if (!c) return nullptr;
  return {{"holds", c->holds}, {"method", c->method}};
}

}  // namespace

Json ambient_json(const GroundSet& set) {
  if (set.is_interval()) return {{"kind", "interval"}, {"N", std::get<Interval>(set.ambient()).N}};
  return {{"kind", "field"}, {"q", set.space()->q()}, {"n", set.space()->dim()}};
}

Json to_json(const QConstants& k) {
  return {{"q", k.q},
          {"y_star", k.y_star},
          {"g_star", k.g_star},
          {"c_q", k.c_q},
          {"C_q", k.C_q},
          {"thm11_exponent", thm11_exponent(k)},
          {"bracket_unimodal", k.bracket_unimodal}};
}

Json to_json(const BoundReport& b) {
  Json inputs = Json::object();
  for (const auto& [name, v] : b.inputs) inputs[name] = v;
  return {{"name", b.name}, {"inputs", inputs}, {"log2_value", b.log2_value}, {"value", optional_number(b.value)},
          {"notes", b.notes}};
}

Json to_json(const ContainerParams& p) {
  return {{"log2_epsilon", p.log2_epsilon},
          {"log2_tau", p.log2_tau},
          {"log2_count_exponent", p.log2_count_exponent},
          {"log2_log2_container_count", p.log2_log2_container_count},
          {"iterations", p.iterations ? Json(*p.iterations) : Json(nullptr)},
          {"tau_hypothesis", p.tau_hypothesis}};
}

Json to_json(const ContainerHypotheses& h) {
  return {{"tau_ok", h.tau_ok}, {"delta_ok", h.delta_ok}, {"tau_limit", h.tau_limit}, {"delta_limit", h.delta_limit}};
}

Json to_json(const ProbabilityBound& b) {
  return {{"log2_m", b.log2_m},
          {"log2_container_count", b.log2_container_count},
          {"log2_product", b.log2_product},
          {"log2_envelope", b.log2_envelope},
          {"log2_exact_product", optional_number(b.log2_exact_product)},
          {"report", to_json(b.report)}};
}

Json to_json(const HConditionReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"name", c.name},
                     {"evaluated", c.evaluated},
                     {"passed", c.passed},
                     {"first_failure_log_N", optional_number(c.first_failure_log_N)},
                     {"last_failure_log_N", optional_number(c.last_failure_log_N)}});
  }
  return {{"conditions", conds}, {"all_pass", r.all_pass()}, {"threshold_log_N", optional_number(r.threshold_log_N)}};
}

Json to_json(const APCounts& c) {
  return {{"k", c.k}, {"ordered_nontrivial", c.ordered_nontrivial}, {"unordered_nontrivial", c.unordered_nontrivial}};
}

Json to_json(const APHypergraph& h) {
  return {{"vertex_count", h.vertex_count},
          {"edge_count", h.edges.size()},
          {"d_numerator", h.d_numerator},
          {"d_denominator", h.d_denominator},
          {"d", h.d_avg()},
          {"delta2", h.delta2},
          {"delta3", h.delta3}};
}

Json to_json(const EnergyProfile& e) {
  return {{"set_size", e.set_size},
          {"energy", e.energy},
          {"distinct_sums", e.rep_counts.size()},
          {"t_ordered", e.t_ordered},
          {"t_nontrivial_unordered", e.t_nontrivial_unordered}};
}

Json to_json(const CauchySchwarzReport& c) {
  return {{"lhs", to_decimal(c.lhs)}, {"rhs", to_decimal(c.rhs)}, {"holds", c.lhs <= c.rhs}, {"slack_ratio", c.slack_ratio}};
}

Json to_json(const ConstructionReport& r, const std::string& groundset_digest) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"size", s.size}});
  return {{"name", r.name},
          {"parameters", r.parameters},
          {"ambient", ambient_json(r.output)},
          {"output_size", r.output.size()},
          {"output_sha256", groundset_digest},
          {"certificates", {{"three_ap_free", certificate(r.three_ap_free)}, {"four_ap_free", certificate(r.four_ap_free)}}},
          {"deleted_count", r.deleted_count},
          {"stages", stages},
          {"diagnostics", r.diagnostics}};
}

Json to_json(const ExtremalResult& r) {
  return {{"mode", to_string(r.mode)},
          {"k", r.k},
          {"size", r.size},
          {"optimal", r.optimal},
          {"budget_exhausted", r.budget_exhausted},
          {"nodes_explored", r.nodes_explored},
          {"ambient", ambient_json(r.witness)},
          {"witness", std::vector<std::uint64_t>(r.witness.members().begin(), r.witness.members().end())}};
}

Json to_json(const SupersatReport& r) {
  Json j = {{"kind", r.kind},
            {"trial", r.trial},
            {"trial_seed", r.trial_seed},
            {"set_size", r.set_size},
            {"measured_count", r.measured_count},
            {"nontrivial_ordered", r.nontrivial_ordered},
            {"predicted_lower_bound", r.predicted_lower_bound},
            {"ratio", r.ratio},
            {"pass", r.pass}};
  if (r.kind == "fqn") {
    j["q"] = r.q;
    j["n"] = r.n;
    j["s"] = r.s;
    j["random_expectation"] = optional_number(r.random_expectation);
    j["random_ratio"] = optional_number(r.random_ratio);
    j["trivial_correction_significant"] = r.trivial_correction_significant;
  } else {
    j["N"] = r.N;
    j["eta"] = r.eta;
  }
  return j;
}

Json stage_timings(const std::vector<Stage>& stages) {
  Json t = Json::array();
  for (const auto& s : stages) t.push_back({{"name", s.name}, {"seconds", s.seconds}});
  return t;
}

}  // namespace apfree
