#include "pathfix/lang/patch.hpp"
#include "pathfix/specinfer/specinfer.hpp"

namespace pathfix::specinfer {

namespace {

bool crashed(const equiv::PathTriplet& t) { return t.theta_tgt.kind != equiv::Theta::Kind::Value; }

struct Expect {
  lang::Location loc;
  std::optional<bool> branch;
  bool skip = false;
};

Expect expect(const ExpectedPathConstraint& c, const cfg::Cfg& cfg, const SliceStep& s) {
  Expect e;
  const cfg::Node& n = cfg.nodes[s.node];
  if (!n.stmt) {
    e.skip = true;
    return e;
  }
  e.loc = n.loc;
  e.branch = s.polarity;
  if (s.fault && c.path.origin.pattern == 3) {
    e.loc = lang::guard_location(n.loc);
    e.branch = true;
  }
  return e;
}

bool matches(const lang::TraceEntry& t, const Expect& e) {
  if (t.loc != e.loc) return false;
  return !e.branch || (t.branch && *t.branch == *e.branch);
}

// A hint survives only if the strengthened constraint stays feasible.
void strengthen(std::vector<ExpectedPathConstraint>& cs, const std::vector<std::string>& invariants,
                const equiv::PathTriplet& triplet, const lang::Program& prog, const cfg::Cfg& g,
                const sym::SymEnv& env) {
  OracleHint hint{invariants};
  for (auto& c : cs) {
    if (c.pruned) continue;
    std::vector<ExpectedPathConstraint> one{summarize_constraint(c.path, triplet, prog, g, env, hint)};
    if (solve::to_string(one[0].pre) == solve::to_string(c.pre)) continue;
    prune_paths(one, env);
    if (one[0].pruned) continue;
    one[0].id = c.id;
    one[0].candidate = c.candidate;
    one[0].hinted = true;
    c = std::move(one[0]);
  }
}

}  // namespace

FaultSpec infer(const lang::Program& prog, const lang::Location& fault,
                const equiv::PathTriplet& triplet, const sym::SymEnv& env,
                const SpecOptions& opts, const std::set<std::string>& oracle_prune,
                int first_ep) {
  FaultSpec fs;
  fs.triplet = triplet;
  const lang::Function* fn = prog.find(fault.function);
  if (!fn) throw SpecError(SpecError::Kind::NoCandidates, "unknown function " + fault.function);
  cfg::Cfg g = cfg::build_cfg(*fn);
  cfg::LineGraph lg = cfg::line_graph(g);
  int k = first_ep - 1;
  auto build = [&](const SpecOptions& o) {
    std::vector<ExpectedPathConstraint> out;
    for (const auto& cand : derive_expected_paths(prog, g, lg, fault, triplet, o)) {
      std::string id = "EP" + std::to_string(++k);
      try {
        ExpectedPathConstraint c = summarize_constraint(slice_path(cand, g, prog), triplet, prog, g, env);
        c.candidate = k - first_ep + 1;
        c.id = id;
        out.push_back(std::move(c));
      } catch (const SpecError& e) {
        if (e.kind() != SpecError::Kind::UnsupportedStatement) throw;
        fs.log.push_back({id, true, std::string("Unsupported: ") + e.what()});
      }
    }
    auto log = prune_paths(out, env, oracle_prune);
    fs.log.insert(fs.log.end(), log.begin(), log.end());
    if (!o.invariants.empty()) strengthen(out, o.invariants, triplet, prog, g, env);
    for (auto& c : out) fs.constraints.push_back(std::move(c));
  };
  build(opts);
  if (fs.retained().empty() && crashed(triplet) && !opts.synthetic) {
    SpecOptions o = opts;
    o.synthetic = true;
    build(o);
  }
  for (const auto& c : fs.constraints) fs.synthetic = fs.synthetic || c.path.origin.pattern == 3;
  return fs;
}

TraceMatch match_trace(const ExpectedPathConstraint& c, const cfg::Cfg& cfg,
                       const lang::ExecResult& run, const solve::Model& inputs) {
  const auto& steps = c.path.steps;
  std::vector<Expect> want;
  for (const auto& s : steps) want.push_back(expect(c, cfg, s));
  std::size_t first = 0;
  while (first < want.size() && want[first].skip) ++first;
  TraceMatch best;
  if (first == want.size()) return best;

  int depth = -1;
  for (const auto& t : run.trace)
    if (t.loc.function == cfg.function && (depth < 0 || t.depth < depth)) depth = t.depth;
  std::vector<std::uint64_t> frames;
  for (const auto& t : run.trace)
    if (t.loc.function == cfg.function && t.depth == depth &&
        (frames.empty() || frames.back() != t.frame))
      frames.push_back(t.frame);

  std::size_t best_len = 0;
  for (auto f = frames.rbegin(); f != frames.rend(); ++f) {
    std::vector<const lang::TraceEntry*> tr;
    for (const auto& t : run.trace)
      if (t.frame == *f) tr.push_back(&t);
    for (std::size_t start = tr.size(); start-- > 0;) {
      if (!matches(*tr[start], want[first])) continue;
      std::vector<long> at(steps.size(), -1);
      std::size_t pos = start;
      std::size_t j = first;
      bool hole = false;
      for (; j < steps.size(); ++j) {
        if (want[j].skip) continue;
        if (!steps[j].havoc.empty())
          while (pos < tr.size() && !matches(*tr[pos], want[j])) ++pos;
        if (pos >= tr.size() || !matches(*tr[pos], want[j])) break;
        hole = hole || steps[j].fault;
        at[j] = static_cast<long>(pos++);
      }
      bool full = j == steps.size();
      if (!hole || (!full && j <= best_len)) continue;

      auto before = [&](std::size_t k) -> const std::map<std::string, lang::Value>* {
        if (at[k] > 0) return &tr[at[k] - 1]->state;
        return nullptr;
      };
      solve::Model m;
      auto bind = [&](const std::string& name, const std::string& base,
                      const std::map<std::string, lang::Value>* st) {
        if (st) {
          if (auto it = st->find(base); it != st->end()) m[name] = it->second;
        } else if (auto it = inputs.find(base); it != inputs.end()) {
          m[name] = it->second;
        }
      };
      for (const auto& d : c.defs) {
        switch (d.kind) {
          case SsaDef::Kind::Input:
            if (auto it = inputs.find(d.name); it != inputs.end()) m[d.name] = it->second;
            break;
          case SsaDef::Kind::Entry:
            bind(d.name, d.base, before(first));
            break;
          case SsaDef::Kind::After:
            if (d.step >= 0 && at[d.step] >= 0) bind(d.name, d.base, &tr[at[d.step]]->state);
            break;
          case SsaDef::Kind::Havoc:
            if (d.step >= 0 && at[d.step] >= 0) bind(d.name, d.base, before(d.step));
            break;
          case SsaDef::Kind::Free:
            break;
        }
      }
      best.valuation = std::move(m);
      if (full) {
        best.fit = TraceMatch::Fit::Followed;
        best.diverged_step = -1;
        return best;
      }
      best.fit = TraceMatch::Fit::Diverged;
      best.diverged_step = static_cast<int>(j);
      best_len = j;
    }
  }
  return best;
}

std::optional<solve::Model> valuation_from_trace(const ExpectedPathConstraint& c,
                                                 const cfg::Cfg& cfg,
                                                 const lang::ExecResult& run,
                                                 const solve::Model& inputs) {
  auto m = match_trace(c, cfg, run, inputs);
  if (m.fit != TraceMatch::Fit::Followed) return std::nullopt;
  return m.valuation;
}

const char* to_string(TraceVerdict v) {
  switch (v) {
    case TraceVerdict::Holds: return "Holds";
    case TraceVerdict::Vacuous: return "Vacuous";
    case TraceVerdict::Violated: return "Violated";
    case TraceVerdict::NotReached: return "NotReached";
  }
  return "?";
}

TraceVerdict evaluate_on_trace(const ExpectedPathConstraint& c, const cfg::Cfg& cfg,
                               const lang::ExecResult& run, const solve::Model& inputs,
                               const lang::ExprPtr& patch, const sym::SymEnv& env) {
  auto m = match_trace(c, cfg, run, inputs);
  if (m.fit == TraceMatch::Fit::Missed) return TraceVerdict::NotReached;
  solve::Term h = c.hole_term(patch);
  solve::Model all = m.valuation;
  for (const auto& [k, val] : inputs) all.emplace(k, val);
  if (m.fit == TraceMatch::Fit::Followed) {
    solve::Formula f = solve::simplify(c.formula(env, h, false), all);
    return solve::check_sat(f, env.solver).status == solve::Status::Sat ? TraceVerdict::Holds
                                                                        : TraceVerdict::Violated;
  }
  // The branch the trace did not take must be false under the prefix valuation.
  std::vector<solve::Term> branch;
  for (const auto& t : c.transitions)
    if (t.step == m.diverged_step)
      branch.push_back(t.hole ? solve::substitute(t.term, {{c.hole.beta, h}}) : t.term);
  if (branch.empty()) return TraceVerdict::Violated;
  solve::Formula f = c.formula(env, h, false);
  f.body = solve::conj(branch);
  f = solve::simplify(f, all);
  return solve::check_sat(f, env.solver).status == solve::Status::Unsat ? TraceVerdict::Vacuous
                                                                        : TraceVerdict::Violated;
}

bool trace_consistent(const FaultSpec& spec, const cfg::Cfg& cfg, const lang::ExecResult& run,
                      const solve::Model& inputs, const lang::ExprPtr& patch,
                      const sym::SymEnv& env) {
  for (const auto* c : spec.retained()) {
    try {
      if (evaluate_on_trace(*c, cfg, run, inputs, patch, env) == TraceVerdict::Holds) return true;
    } catch (const SpecError&) {
    }
  }
  return false;
}

}  // namespace pathfix::specinfer
