#include "pathfix/driver/report.hpp"

#include "pathfix/lang/printer.hpp"
#include "pathfix/solve/term.hpp"

namespace pathfix::driver {

using nlohmann::json;

json to_json(const lang::Value& v) {
  switch (v.type) {
    case lang::Type::Int: return v.i;
    case lang::Type::Bool: return v.i != 0;
    case lang::Type::IntArray: return v.arr;
    case lang::Type::Void: return nullptr;
  }
  return nullptr;
}

json to_json(const std::vector<lang::Value>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

json to_json(const equiv::TestCase& t) {
  return {{"inputs", to_json(t.inputs)}, {"expected", t.expected.str()}};
}

json to_json(const equiv::PathTriplet& t) {
  json w = json::object();
  for (const auto& [k, v] : t.witness) w[k] = to_json(v);
  json j = {{"id", t.id},
            {"pi", t.input_condition ? solve::to_string(t.input_condition) : "true"},
            {"theta_ref", t.theta_ref.str()},
            {"theta_tgt", t.theta_tgt.str()},
            {"fault", t.fault},
            {"witness", w}};
  if (!t.warning.empty()) j["warning"] = t.warning;
  return j;
}

json to_json(const specinfer::FaultSpec& s, const cfg::Cfg& g, const sym::SymEnv& env,
             json& constraints) {
  json paths = json::array();
  for (const auto& c : s.constraints) {
    paths.push_back({{"id", c.id},
                     {"triplet", c.triplet_id},
                     {"pattern", c.path.origin.pattern},
                     {"path", c.path.origin.describe(g)},
                     {"pruned", c.pruned},
                     {"reason", c.pruned ? c.reason : "retained"},
                     {"oracle_pruned", c.oracle_pruned}});
    if (c.pruned) continue;
    constraints.push_back({{"id", c.id},
                           {"triplet", c.triplet_id},
                           {"text", c.text()},
                           {"instantiated", c.folded_text()},
                           {"smtlib", c.smtlib(env)},
                           {"hinted", c.hinted}});
  }
  for (const auto& l : s.log)
    if (l.reason.rfind("Unsupported", 0) == 0)
      paths.push_back({{"id", l.id}, {"triplet", s.triplet.id}, {"pruned", true}, {"reason", l.reason}});
  return paths;
}

json to_json(const verify::VerificationReport& r) {
  json faults = json::array();
  for (const auto& f : r.fault_results) {
    json j = {{"triplet", f.triplet}, {"fixed", f.fixed}, {"got", f.got.str()}};
    if (!f.fixed) j["counterexample"] = to_json(f.counterexample);
    faults.push_back(j);
  }
  json benign = json::array();
  for (const auto& b : r.benign_results)
    benign.push_back({{"index", b.index}, {"preserved", b.preserved}, {"test", to_json(b.test)}});
  json j = {{"patch", r.patch},
            {"accepted", r.accepted},
            {"verdict", r.accepted ? "Accepted" : "Rejected"},
            {"reason", r.reason},
            {"fault_paths", faults},
            {"benign_paths", benign},
            {"warnings", r.warnings}};
  if (r.equivalence)
    j["equivalence"] = {{"triplets", r.equivalence->triplets},
                        {"faults", r.equivalence->faults},
                        {"truncated", r.equivalence->truncated}};
  return j;
}

json to_json(const synth::ComponentPool& p) {
  json ops = json::array();
  for (auto o : p.operators) ops.push_back(synth::to_string(o));
  return {{"variables", p.variables}, {"tiers", p.tiers}, {"operators", ops},
          {"constants", p.constants}, {"hole_type", lang::to_string(p.hole_type)},
          {"max_depth", p.max_depth}};
}

json to_json(const synth::CegisResult& r) {
  json cands = json::array();
  for (const auto& l : r.log) cands.push_back(json::parse(l));
  json cex = json::array();
  for (const auto& t : r.counterexamples) cex.push_back(to_json(t));
  return {{"status", synth::to_string(r.status)},
          {"reason", r.reason},
          {"rounds", r.rounds},
          {"candidates_tried", r.tried},
          {"pool", to_json(r.pool)},
          {"counterexamples", cex},
          {"candidates", cands}};
}

json to_json(const synth::Patch& p, const lang::Program& before) {
  lang::Program after = p.apply(before);
  json prov = p.oracle ? json{{"kind", "OracleSuggested"}}
                       : json{{"kind", "Synthesized"}, {"round", p.round}, {"candidates_tried", p.tried}};
  json j = {{"expression", lang::to_source(p.expr)},
            {"location", p.location.str()},
            {"kind", synth::to_string(p.kind)},
            {"provenance", prov},
            {"summary", p.str()},
            {"diff", unified_diff(lang::to_source(before), lang::to_source(after), "target.mc")},
            {"program", lang::to_source(after)}};
  if (p.guard_value) j["guard_value"] = lang::to_source(p.guard_value);
  return j;
}

}  // namespace pathfix::driver
