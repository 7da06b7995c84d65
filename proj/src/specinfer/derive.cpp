#include <algorithm>
#include <functional>

#include "pathfix/specinfer/specinfer.hpp"

namespace pathfix::specinfer {

namespace {

bool is_literal(const lang::ExprPtr& e) {
  return e && (e->kind == lang::ExprKind::IntLit || e->kind == lang::ExprKind::BoolLit);
}

bool calls_itself(const lang::Function& fn) {
  bool found = false;
  std::function<void(const lang::ExprPtr&)> visit = [&](const lang::ExprPtr& e) {
    if (!e) return;
    if (e->kind == lang::ExprKind::Call && e->name == fn.name) found = true;
    for (const auto& a : e->args) visit(a);
  };
  lang::for_each_stmt(fn.body, [&](const lang::Stmt& s) {
    visit(s.expr);
    visit(s.index);
  });
  return found;
}

int exit_node(const cfg::Cfg& cfg, const lang::Location& loc) {
  if (loc.function != cfg.function) return -1;
  if (loc.path.empty()) {
    for (int e : cfg.exits())
      if (cfg.nodes[e].implicit) return e;
    return -1;
  }
  return cfg.find(loc);
}

bool crashed(const equiv::PathTriplet& t) { return t.theta_tgt.kind != equiv::Theta::Kind::Value; }

std::set<int> select_exits(const lang::Program& prog, const cfg::Cfg& cfg,
                           const equiv::PathTriplet& t) {
  std::vector<int> all = cfg.exits();
  const bool entry = prog.entry == cfg.function;
  if (!entry || t.theta_ref.kind != equiv::Theta::Kind::Value ||
      t.theta_ref.value.type == lang::Type::Void)
    return {all.begin(), all.end()};
  std::set<int> literal, open;
  for (int e : all) {
    const cfg::Node& n = cfg.nodes[e];
    const lang::ExprPtr ret = n.stmt ? n.stmt->expr : nullptr;
    if (is_literal(ret)) {
      if (ret->value == t.theta_ref.value.i) literal.insert(e);
    } else {
      open.insert(e);
    }
  }
  return literal.empty() ? open : literal;
}

}  // namespace

std::vector<int> SlicedPath::retained_nodes() const {
  std::vector<int> out;
  for (const auto& s : steps) out.push_back(s.node);
  return out;
}

std::size_t SlicedPath::fault_index() const {
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i].fault) return i;
  return steps.size();
}

std::vector<cfg::CandidatePath> derive_expected_paths(const lang::Program& prog,
                                                      const cfg::Cfg& cfg,
                                                      const cfg::LineGraph& lg,
                                                      const lang::Location& fault,
                                                      const equiv::PathTriplet& triplet,
                                                      const SpecOptions& opts) {
  const int fnode = cfg.find(fault);
  if (fnode < 0) throw SpecError(SpecError::Kind::NoCandidates, "no statement at " + fault.str());
  std::vector<cfg::CandidatePath> out;
  if (!opts.synthetic) {
    std::optional<int> fexit;
    if (triplet.target_exit) {
      int e = exit_node(cfg, *triplet.target_exit);
      if (e >= 0) fexit = e;
    }
    std::set<int> exits = select_exits(prog, cfg, triplet);
    if (!exits.empty())
      out = cfg::enumerate_paths(cfg, lg, fault, exits, opts.limits, fexit).paths;
  }
  if (out.empty() && crashed(triplet)) {
    for (auto& ctx : cfg::pre_contexts(cfg, fnode)) {
      cfg::CandidatePath p;
      p.pattern = 3;
      p.nodes = {fnode};
      p.exit = kSyntheticExit;
      p.pre_context = std::move(ctx);
      out.push_back(std::move(p));
    }
  }
  if (out.empty())
    throw SpecError(SpecError::Kind::NoCandidates,
                    "no expected path for " + triplet.id + " from " + fault.str());
  return out;
}

SlicedPath slice_path(const cfg::CandidatePath& candidate, const cfg::Cfg& cfg,
                      const lang::Program& prog) {
  SlicedPath sp;
  sp.origin = candidate;
  if (const lang::Function* fn = prog.find(cfg.function); fn && calls_itself(*fn))
    sp.recursion = RecursionMode::FirstSelfInvocation;
  for (const auto& c : candidate.pre_context) {
    SliceStep s;
    s.node = c.node;
    s.polarity = c.polarity;
    s.context = true;
    sp.steps.push_back(s);
  }
  const int fnode = candidate.nodes.front();
  const auto& enclosing = cfg.nodes[fnode].loops;
  for (std::size_t i = 0; i < candidate.nodes.size(); ++i) {
    SliceStep s;
    s.node = candidate.nodes[i];
    s.fault = i == 0;
    const cfg::Node& n = cfg.nodes[s.node];
    if (i < candidate.edges.size() &&
        (n.kind == cfg::NodeKind::Branch || n.kind == cfg::NodeKind::LoopHead))
      s.polarity = cfg.polarity(candidate.edges[i]);
    if (i > 0 && cfg.edges[candidate.edges[i - 1]].kind == cfg::EdgeKind::Back &&
        n.kind == cfg::NodeKind::LoopHead && s.node != fnode &&
        std::find(enclosing.begin(), enclosing.end(), s.node) == enclosing.end()) {
      std::vector<std::string> body = lang::assigned_variables(n.stmt->body);
      std::vector<std::string> step = lang::assigned_variables(n.stmt->alt);
      body.insert(body.end(), step.begin(), step.end());
      for (const auto& v : body)
        if (std::find(s.havoc.begin(), s.havoc.end(), v) == s.havoc.end()) s.havoc.push_back(v);
    }
    sp.steps.push_back(std::move(s));
  }
  return sp;
}

}  // namespace pathfix::specinfer
