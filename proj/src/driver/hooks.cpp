#include "hooks.hpp"

#include <map>
#include <set>
#include <sstream>

#include "pathfix/lang/parser.hpp"
#include "pathfix/lang/patch.hpp"
#include "pathfix/lang/printer.hpp"
#include "pathfix/synth/synth.hpp"

namespace pathfix::driver {

namespace {

using nlohmann::json;

std::string paths_context(const std::vector<specinfer::FaultSpec>& specs) {
  json a = json::array();
  for (const auto& s : specs)
    for (const auto& c : s.constraints)
      a.push_back({{"id", c.id},
                   {"triplet", c.triplet_id},
                   {"pattern", c.path.origin.pattern},
                   {"constraint", c.text()},
                   {"solver_pruned", c.pruned}});
  return a.dump(2);
}

std::string summary_context(const std::vector<specinfer::FaultSpec>& specs) {
  std::ostringstream o;
  std::set<std::string> names;
  for (const auto& s : specs)
    for (const auto* c : s.retained()) {
      o << c->id << " (" << c->triplet_id << ", expected " << s.triplet.theta_ref.str() << "): "
        << c->text() << "\n";
      for (const auto& d : c->defs) names.insert(d.name);
    }
  o << "Variables:";
  for (const auto& n : names) o << " " << n;
  return o.str();
}

std::string patch_context(const std::vector<specinfer::FaultSpec>& specs,
                          const synth::ComponentPool& pool, const std::string& hole) {
  std::ostringstream o;
  for (const auto& s : specs)
    for (const auto* c : s.retained()) o << c->id << ": " << c->folded_text() << "\n";
  o << "Faulty expression: " << hole << "\nVariables:";
  for (const auto& v : pool.variables) o << " " << v;
  o << "\nConstants:";
  for (auto k : pool.constants) o << " " << k;
  o << "\nResult type: " << lang::to_string(pool.hole_type);
  return o.str();
}

json entry(oracle::Task t, const oracle::Outcome& r) {
  json j = {{"task", oracle::to_string(t)}, {"available", r.response.has_value()}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

Hints gather_hints(const oracle::OracleConfig& cfg, const std::string& case_id,
                   const std::string& source, const lang::Program& prog,
                   const lang::Location& fault, const std::vector<specinfer::FaultSpec>& specs) {
  Hints h;
  if (cfg.backend == oracle::Backend::Off) return h;
  const lang::Function* fn = prog.find(fault.function);
  if (!fn) return h;
  std::map<std::string, lang::Type> scope;
  for (const auto& p : lang::scope_at(*fn, fault)) scope[p.name] = p.type;
  lang::ExprPtr hole;
  lang::Type hole_type = lang::Type::Bool;
  try {
    hole = lang::hole_expr(prog, fault);
    hole_type = lang::hole_type(prog, fault);
  } catch (const std::exception&) {
  }
  std::vector<const specinfer::ExpectedPathConstraint*> cs;
  for (const auto& s : specs)
    for (const auto* c : s.retained()) cs.push_back(c);
  bool guard = !cs.empty() && cs.front()->hole.kind == specinfer::HoleKind::Guard;
  if (guard) hole_type = lang::Type::Bool;
  auto pool = synth::prioritize_components(prog, fault, hole, cs, hole_type);

  auto request = [&](oracle::Task t, std::string ctx) {
    return oracle::OracleRequest{t, source, std::move(ctx), oracle::format_contract(t), case_id};
  };
  std::vector<oracle::OracleRequest> reqs = {
      request(oracle::Task::PrunePaths, paths_context(specs)),
      request(oracle::Task::SummarizeConstraint, summary_context(specs)),
      request(oracle::Task::SuggestPatch,
              patch_context(specs, pool, hole && !guard ? lang::to_source(hole) : "(guard)"))};
  auto rs = oracle::consult_all(reqs, cfg);

  for (std::size_t i = 0; i < rs.size(); ++i) {
    json e = entry(reqs[i].task, rs[i]);
    if (rs[i].response) {
      const auto& p = rs[i].response->payload;
      switch (reqs[i].task) {
        case oracle::Task::PrunePaths:
          for (const auto& x : p.pruned) h.prune.insert(x.id);
          e["prune"] = json::array();
          for (const auto& x : p.pruned) e["prune"].push_back({{"id", x.id}, {"reason", x.reason}});
          break;
        case oracle::Task::SummarizeConstraint:
          h.invariants = p.conjuncts;
          e["invariants"] = p.conjuncts;
          break;
        case oracle::Task::SuggestPatch: {
          json kept = json::array(), dropped = json::array();
          for (const auto& text : p.expressions) {
            try {
              auto ex = lang::parse_expression(text, scope);
              if (ex->type != hole_type) throw std::runtime_error("wrong type");
              h.suggestions.push_back(ex);
              kept.push_back(text);
            } catch (const std::exception&) {
              dropped.push_back(text);
            }
          }
          e["suggestions"] = kept;
          if (!dropped.empty()) e["discarded"] = dropped;
          break;
        }
      }
    }
    h.log.push_back(e);
  }
  return h;
}

}  // namespace pathfix::driver
