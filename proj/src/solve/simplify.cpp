#include "pathfix/solve/solver.hpp"

namespace pathfix::solve {
namespace {

using LengthOf = std::function<int(const Term&)>;

bool is_int(const Term& t) { return t->op == Op::IntConst; }
bool is_bool(const Term& t) { return t->op == Op::BoolConst; }

Term fold(const Term& t, const LengthOf& length) {
  const auto& a = t->args;
  switch (t->op) {
    case Op::Neg:
      if (is_int(a[0]))
        return int_const(static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(a[0]->value)));
      if (a[0]->op == Op::Neg) return a[0]->args[0];
      return t;
    case Op::Not:
      if (is_bool(a[0])) return bool_const(!a[0]->value);
      if (a[0]->op == Op::Not) return a[0]->args[0];
      return t;
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Mod:
    case Op::BitAnd: case Op::BitOr: case Op::BitXor:
      if (is_int(a[0]) && is_int(a[1])) {
        if (auto v = evaluate_int(t, {})) return int_const(*v);
      }
      return t;
    case Op::Eq: case Op::Ne: case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
      if ((is_int(a[0]) && is_int(a[1])) || (is_bool(a[0]) && is_bool(a[1])))
        return bool_const(evaluate(t, {}));
      return t;
    case Op::And:
      if (is_false(a[0]) || is_false(a[1])) return bool_const(false);
      if (is_true(a[0])) return a[1];
      if (is_true(a[1])) return a[0];
      return t;
    case Op::Or:
      if (is_true(a[0]) || is_true(a[1])) return bool_const(true);
      if (is_false(a[0])) return a[1];
      if (is_false(a[1])) return a[0];
      return t;
    case Op::Implies:
      if (is_false(a[0]) || is_true(a[1])) return bool_const(true);
      if (is_true(a[0])) return a[1];
      if (is_false(a[1])) return lnot(a[0]);
      return t;
    case Op::Ite:
      if (is_bool(a[0])) return a[0]->value ? a[1] : a[2];
      return t;
    case Op::Select: {
      if (!is_int(a[1])) return t;
      std::int64_t k = a[1]->value;
      if (a[0]->op == Op::ArrayLit) {
        if (k >= 0 && k < static_cast<std::int64_t>(a[0]->elems.size())) return int_const(a[0]->elems[k]);
        return t;
      }
      if (a[0]->op == Op::Store && is_int(a[0]->args[1])) {
        std::int64_t i = a[0]->args[1]->value;
        int len = length(a[0]);
        if (len < 0 || i < 0 || i >= len || k < 0 || k >= len) return t;
        if (i == k) return a[0]->args[2];
        return fold(select(a[0]->args[0], a[1]), length);
      }
      return t;
    }
    case Op::Store:
      if (a[0]->op == Op::ArrayLit && is_int(a[1]) && is_int(a[2])) {
        std::int64_t i = a[1]->value;
        if (i < 0 || i >= static_cast<std::int64_t>(a[0]->elems.size())) return t;
        auto elems = a[0]->elems;
        elems[i] = a[2]->value;
        return array_lit(std::move(elems));
      }
      return t;
    default:
      return t;
  }
}

Term fold_all(const Term& t, const LengthOf& length) {
  Term folded = rewrite(t, [&](const Term& n) { return fold(n, length); });
  std::vector<Term> kept;
  for (const auto& c : conjuncts(folded)) {
    if (is_true(c)) continue;
    if (is_false(c)) return bool_const(false);
    bool dup = false;
    for (const auto& k : kept) dup = dup || structurally_equal(k, c);
    if (!dup) kept.push_back(c);
  }
  return conj(kept);
}

}  // namespace

Term simplify_term(const Term& t) {
  return fold_all(t, [](const Term& arr) -> int {
    const TermNode* n = arr.get();
    while (n->op == Op::Store) n = n->args[0].get();
    return n->op == Op::ArrayLit ? static_cast<int>(n->elems.size()) : -1;
  });
}

Formula simplify(const Formula& f, const Model& bindings) {
  std::map<std::string, Term> sub;
  Formula out;
  for (const auto& d : f.decls) {
    auto it = bindings.find(d.name);
    if (it == bindings.end()) {
      out.decls.push_back(d);
      continue;
    }
    const lang::Value& v = it->second;
    switch (d.sort) {
      case Sort::Int: sub[d.name] = int_const(v.i); break;
      case Sort::Bool: sub[d.name] = bool_const(v.i != 0); break;
      case Sort::Array:
        if (static_cast<int>(v.arr.size()) != d.length)
          throw std::invalid_argument("binding for " + d.name + " has the wrong length");
        sub[d.name] = array_lit(v.arr);
        break;
    }
  }
  LengthOf length = [&](const Term& arr) -> int {
    const TermNode* n = arr.get();
    while (n->op == Op::Store) n = n->args[0].get();
    if (n->op == Op::ArrayLit) return static_cast<int>(n->elems.size());
    if (n->op == Op::Var)
      if (const Decl* d = f.find(n->name)) return d->length;
    return -1;
  };
  out.body = fold_all(substitute(f.body, sub), length);
  return out;
}

}  // namespace pathfix::solve
