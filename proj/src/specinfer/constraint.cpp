#include <set>
#include <sstream>

#include "pathfix/specinfer/specinfer.hpp"

namespace pathfix::specinfer {

using solve::Op;
using solve::Sort;
using solve::Term;

namespace {

Sort sort_of(lang::Type t) {
  switch (t) {
    case lang::Type::Bool: return Sort::Bool;
    case lang::Type::IntArray: return Sort::Array;
    default: return Sort::Int;
  }
}

Term value_term(const lang::Value& v) {
  switch (v.type) {
    case lang::Type::Bool: return solve::bool_const(v.i != 0);
    case lang::Type::IntArray: return solve::array_lit(v.arr);
    default: return solve::int_const(v.i);
  }
}

}  // namespace

Term ExpectedPathConstraint::hole_term(const lang::ExprPtr& e) const {
  using K = lang::ExprKind;
  switch (e->kind) {
    case K::IntLit: return solve::int_const(e->value);
    case K::BoolLit: return solve::bool_const(e->value != 0);
    case K::Var: {
      auto it = hole.versions.find(e->name);
      if (it == hole.versions.end())
        throw SpecError(SpecError::Kind::UnsupportedStatement, e->name + " not in scope at hole");
      return solve::var(it->second, sort_of(e->type));
    }
    case K::Index: {
      auto it = arrays.find(e->name);
      if (it == arrays.end())
        throw SpecError(SpecError::Kind::UnsupportedStatement, e->name + " not in scope at hole");
      return solve::select(it->second, hole_term(e->args[0]));
    }
    case K::Unary: {
      Term a = hole_term(e->args[0]);
      return e->unop == lang::UnOp::Neg ? solve::neg(a) : solve::lnot(a);
    }
    case K::Binary:
      return solve::binary(solve::from_lang(e->binop), hole_term(e->args[0]),
                           hole_term(e->args[1]));
    case K::Call:
      if (e->name == "len" && !e->args.empty())
        if (auto it = lengths.find(e->args[0]->name); it != lengths.end())
          return solve::int_const(it->second);
      break;
  }
  throw SpecError(SpecError::Kind::UnsupportedStatement, "calls cannot fill a hole");
}

Term ExpectedPathConstraint::body(const Term& h) const {
  std::vector<Term> parts{pre};
  for (const auto& t : transitions)
    parts.push_back(t.hole && h ? solve::substitute(t.term, {{hole.beta, h}}) : t.term);
  parts.push_back(post);
  parts.push_back(side);
  return solve::conj(parts);
}

solve::Formula ExpectedPathConstraint::formula(const sym::SymEnv& env, const Term& h,
                                               bool instantiate) const {
  solve::Formula f;
  for (const auto& d : env.inputs) f.declare(d);
  for (const auto& d : decls) f.declare(d);
  if (!h) f.declare({hole.beta, sort_of(hole.type), 0});
  f.add(env.pre);
  f.add(body(h));
  return instantiate ? solve::simplify(f, instantiation) : f;
}

std::string ExpectedPathConstraint::text() const {
  std::ostringstream os;
  os << solve::to_string(pre);
  for (const auto& t : transitions) os << " && " << solve::to_string(t.term);
  os << " => " << solve::to_string(post);
  return os.str();
}

std::string ExpectedPathConstraint::folded_text() const {
  std::map<std::string, Term> sub;
  std::vector<std::string> parts;
  for (const auto& [name, v] : instantiation) {
    if (v.type == lang::Type::IntArray) continue;
    sub[name] = value_term(v);
    parts.push_back(name + " == " + v.str());
  }
  for (const auto& t : transitions) {
    Term s = solve::simplify_term(solve::substitute(t.term, sub));
    if (!solve::is_true(s)) parts.push_back(solve::to_string(s));
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? " && " : "") << parts[i];
  os << " => " << solve::to_string(solve::simplify_term(solve::substitute(post, sub)));
  return os.str();
}

std::string ExpectedPathConstraint::table(const cfg::Cfg& cfg) const {
  std::ostringstream os;
  os << id << " (" << triplet_id << ", pattern " << path.origin.pattern << ")\n";
  os << "  P: " << solve::to_string(pre) << "\n";
  for (const auto& t : transitions) {
    os << "  " << (t.hole ? "*" : t.context ? "<" : " ") << " ";
    std::string label = cfg.nodes[t.node].label();
    os << label << std::string(label.size() < 24 ? 24 - label.size() : 1, ' ')
       << solve::to_string(t.term) << "\n";
  }
  os << "  Q: " << solve::to_string(post) << "\n";
  if (!solve::is_true(side)) os << "  side: " << solve::to_string(side) << "\n";
  if (pruned) os << "  pruned: " << reason << "\n";
  return os.str();
}

std::string ExpectedPathConstraint::smtlib(const sym::SymEnv& env) const {
  return solve::to_smtlib(formula(env, nullptr, false), env.solver.int_bound);
}

bool ssa_well_formed(const ExpectedPathConstraint& c) {
  std::set<std::string> defined{c.hole.beta};
  for (const auto& d : c.defs)
    if (d.kind == SsaDef::Kind::Input || d.kind == SsaDef::Kind::Entry) defined.insert(d.name);
  auto admit_until = [&](int step) {
    for (const auto& d : c.defs)
      if ((d.kind == SsaDef::Kind::Havoc || d.kind == SsaDef::Kind::Free) && d.step <= step)
        defined.insert(d.name);
  };
  auto covered = [&](const Term& t, const std::string& self) {
    for (const auto& v : solve::free_vars(t))
      if (!defined.count(v) && v != self) return false;
    return true;
  };
  for (const auto& t : c.transitions) {
    admit_until(t.step);
    if (!covered(t.term, t.defines)) return false;
    if (!t.defines.empty()) {
      if (defined.count(t.defines)) return false;
      defined.insert(t.defines);
    }
  }
  admit_until(1 << 30);
  return covered(c.post, "") && covered(c.side, "");
}

std::vector<const ExpectedPathConstraint*> FaultSpec::retained() const {
  std::vector<const ExpectedPathConstraint*> out;
  for (const auto& c : constraints)
    if (!c.pruned) out.push_back(&c);
  return out;
}

}  // namespace pathfix::specinfer
