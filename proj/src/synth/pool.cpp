#include <algorithm>
#include <functional>
#include <set>

#include "pathfix/lang/parser.hpp"
#include "pathfix/lang/patch.hpp"
#include "pathfix/lang/printer.hpp"
#include "pathfix/synth/synth.hpp"

namespace pathfix::synth {

const char* to_string(OpCategory c) {
  switch (c) {
    case OpCategory::Relational: return "relational";
    case OpCategory::Logical: return "logical";
    case OpCategory::Arithmetic: return "arithmetic";
    case OpCategory::Bitwise: return "bitwise";
  }
  return "?";
}

const char* to_string(PatchKind k) {
  switch (k) {
    case PatchKind::ReplaceCondition: return "ReplaceCondition";
    case PatchKind::ReplaceAssignRhs: return "ReplaceAssignRhs";
    case PatchKind::InsertGuardReturn: return "InsertGuardReturn";
  }
  return "?";
}

ComponentPool ComponentPool::for_round(int r) const {
  ComponentPool p = *this;
  p.round = std::max(r, 1);
  if (!tiers.empty()) {
    std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(p.round), tiers.size());
    p.variables.resize(tiers[t - 1]);
    p.tiers.resize(t);
  }
  std::size_t ops = p.round == 1 ? 2 : p.round < 4 ? 3 : 4;
  if (p.operators.size() > ops) p.operators.resize(ops);
  return p;
}

lang::Program Patch::apply(const lang::Program& prog) const {
  if (kind == PatchKind::InsertGuardReturn)
    return lang::insert_guard(prog, location, expr, guard_value);
  return lang::apply_patch(prog, location, expr);
}

std::string Patch::str() const {
  std::string e = lang::to_source(expr);
  if (kind == PatchKind::InsertGuardReturn)
    return location.str() + ": insert if (" + e + ") return" +
           (guard_value ? " " + lang::to_source(guard_value) : std::string()) + ";";
  return location.str() + ": " + e;
}

namespace {

void collect_literals(const lang::ExprPtr& e, std::vector<std::int64_t>& out) {
  if (!e) return;
  if (e->kind == lang::ExprKind::IntLit) out.push_back(e->value);
  for (const auto& a : e->args) collect_literals(a, out);
}

}  // namespace

ComponentPool prioritize_components(const lang::Program& prog, const lang::Location& fault,
                                    const lang::ExprPtr& fault_expr,
                                    const std::vector<const specinfer::ExpectedPathConstraint*>& cs,
                                    lang::Type hole_type) {
  ComponentPool pool;
  pool.hole_type = hole_type;
  const lang::Function* fn = prog.find(fault.function);
  std::vector<lang::Param> scope;
  if (fn) scope = lang::scope_at(*fn, fault);
  for (const auto& p : scope) pool.types[p.name] = p.type;
  auto in_scope = [&](const std::string& v) { return pool.types.count(v) > 0; };

  std::vector<std::string> order;
  auto add = [&](const std::string& v) {
    if (in_scope(v) && std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
  };
  auto close_tier = [&] {
    if (order.size() > (pool.tiers.empty() ? 0 : pool.tiers.back())) pool.tiers.push_back(order.size());
  };

  if (fault_expr)
    for (const auto& v : lang::variables(fault_expr)) add(v);
  close_tier();

  std::vector<std::pair<int, std::string>> assigned;
  for (const auto* c : cs) {
    int hole_step = static_cast<int>(c->path.fault_index());
    for (const auto& t : c->transitions) {
      if (t.defines.empty() || t.hole) continue;
      for (const auto& d : c->defs)
        if (d.name == t.defines) assigned.emplace_back(std::abs(t.step - hole_step), d.base);
    }
  }
  std::stable_sort(assigned.begin(), assigned.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [dist, v] : assigned) add(v);
  close_tier();

  for (const auto& p : scope) add(p.name);
  close_tier();
  pool.variables = order;

  if (hole_type == lang::Type::Int)
    pool.operators = {OpCategory::Arithmetic, OpCategory::Relational, OpCategory::Logical,
                      OpCategory::Bitwise};
  else
    pool.operators = {OpCategory::Relational, OpCategory::Logical, OpCategory::Arithmetic,
                      OpCategory::Bitwise};

  pool.constants = {-1, 0, 1, 2};
  std::vector<std::int64_t> lits;
  if (fn)
    lang::for_each_stmt(fn->body, [&](const lang::Stmt& s) {
      collect_literals(s.expr, lits);
      collect_literals(s.index, lits);
    });
  std::sort(lits.begin(), lits.end());
  for (auto v : lits)
    if (std::find(pool.constants.begin(), pool.constants.end(), v) == pool.constants.end())
      pool.constants.push_back(v);
  return pool;
}

}  // namespace pathfix::synth
