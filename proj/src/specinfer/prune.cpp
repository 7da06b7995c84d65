#include <map>

#include "pathfix/specinfer/specinfer.hpp"

namespace pathfix::specinfer {

using solve::Op;
using solve::Sort;
using solve::Term;

namespace {

Sort sort_of(lang::Type t) { return t == lang::Type::Bool ? Sort::Bool : Sort::Int; }

class Diagnoser {
 public:
  Diagnoser(const ExpectedPathConstraint& c, const sym::SymEnv& env) : c_(c), env_(env) {
    std::vector<Term> parts;
    for (const auto& t : c.transitions) parts.push_back(t.term);
    parts.push_back(c.post);
    path_ = solve::conj(parts);
  }

  std::string reason() {
    if (sat({env_.pre, c_.side, path_}) == solve::Status::Unsat) {
      std::vector<solve::Decl> ghosts;
      Term g = ghost(path_, ghosts);
      if (sat({env_.pre, g}, ghosts) == solve::Status::Sat) return "ArrayBounds";
    }
    if (sat({c_.pre, c_.side, path_}) == solve::Status::Sat) return "ContradictsPre(" + culprits() + ")";
    return "Infeasible";
  }

 private:
  solve::Status sat(const std::vector<Term>& parts, const std::vector<solve::Decl>& extra = {}) {
    solve::Formula f;
    for (const auto& d : env_.inputs) f.declare(d);
    for (const auto& d : c_.decls) f.declare(d);
    for (const auto& d : extra) f.declare(d);
    f.declare({c_.hole.beta, sort_of(c_.hole.type), 0});
    for (const auto& p : parts) f.add(p);
    return solve::check_sat(f, env_.solver).status;
  }

  int length_of(const Term& arr) const {
    Term base = arr;
    while (base->op == Op::Store) base = base->args[0];
    if (base->op == Op::ArrayLit) return static_cast<int>(base->elems.size());
    for (const auto& d : env_.inputs)
      if (d.name == base->name) return d.length;
    for (const auto& d : c_.decls)
      if (d.name == base->name) return d.length;
    return 0;
  }

  // Out-of-range reads become unconstrained ghost values.
  Term ghost(const Term& t, std::vector<solve::Decl>& ghosts) const {
    return solve::rewrite(t, [&](const Term& n) -> Term {
      if (n->op != Op::Select || n->args[1]->op == Op::IntConst) return n;
      const Term& idx = n->args[1];
      std::string name = "ghost_" + std::to_string(ghosts.size());
      ghosts.push_back({name, Sort::Int, 0});
      Term in = solve::conj({solve::binary(Op::Le, solve::int_const(0), idx),
                             solve::binary(Op::Lt, idx, solve::int_const(length_of(n->args[0])))});
      return solve::ite(in, n, solve::var(name, Sort::Int));
    });
  }

  static bool cell_order(const Term& t) {
    if (t->op != Op::Lt && t->op != Op::Le && t->op != Op::Gt && t->op != Op::Ge) return false;
    const Term& a = t->args[0];
    const Term& b = t->args[1];
    return a->op == Op::Select && b->op == Op::Select && a->args[0]->op == Op::Var &&
           b->args[0]->op == Op::Var && a->args[0]->name == b->args[0]->name;
  }

  std::string culprits() {
    std::vector<Term> pre = solve::conjuncts(env_.pre);
    std::vector<Term> found;
    for (std::size_t i = 0; i < pre.size(); ++i) {
      std::vector<Term> parts{c_.pre, c_.side, path_};
      for (std::size_t j = 0; j < pre.size(); ++j)
        if (j != i) parts.push_back(pre[j]);
      if (sat(parts) == solve::Status::Sat) found.push_back(pre[i]);
    }
    if (found.empty()) return solve::to_string(env_.pre);
    bool sorted = true;
    for (const auto& f : found) sorted = sorted && cell_order(f);
    if (sorted) return "sorted";
    return solve::to_string(solve::conj(found));
  }

  const ExpectedPathConstraint& c_;
  const sym::SymEnv& env_;
  Term path_;
};

}  // namespace

std::vector<PruneLog> prune_paths(std::vector<ExpectedPathConstraint>& constraints,
                                  const sym::SymEnv& env,
                                  const std::set<std::string>& oracle_prune) {
  std::vector<PruneLog> log;
  for (auto& c : constraints) {
    if (c.pruned) continue;
    solve::SatResult r = solve::check_sat(c.formula(env, nullptr, true), env.solver);
    if (r.status == solve::Status::Unsat) {
      c.pruned = true;
      c.reason = Diagnoser(c, env).reason();
    }
    log.push_back({c.id, c.pruned, c.pruned ? c.reason
                                            : r.status == solve::Status::Unknown ? "retained (unknown)"
                                                                                : "retained"});
  }
  if (oracle_prune.empty()) return log;
  std::map<std::string, std::vector<ExpectedPathConstraint*>> by_triplet;
  for (auto& c : constraints) by_triplet[c.triplet_id].push_back(&c);
  for (auto& [tid, cs] : by_triplet) {
    std::size_t keep = 0;
    for (auto* c : cs)
      if (!c->pruned && !oracle_prune.count(c->id)) ++keep;
    bool any = false;
    for (auto* c : cs) any = any || (!c->pruned && oracle_prune.count(c->id));
    if (!any) continue;
    if (keep == 0) {
      log.push_back({tid, false, "oracle advice rejected: it would prune every expected path"});
      continue;
    }
    for (auto* c : cs) {
      if (c->pruned || !oracle_prune.count(c->id)) continue;
      c->pruned = true;
      c->oracle_pruned = true;
      c->reason = "Oracle";
      log.push_back({c->id, true, "Oracle"});
    }
  }
  return log;
}

}  // namespace pathfix::specinfer
