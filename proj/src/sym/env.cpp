#include <functional>

#include "pathfix/lang/parser.hpp"
#include "pathfix/sym/sym.hpp"

namespace pathfix::sym {

using lang::BinOp;
using lang::Expr;
using lang::ExprKind;
using lang::ExprPtr;
using solve::Term;

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Returned: return "Returned";
    case Outcome::RuntimeError: return "RuntimeError";
    case Outcome::BoundExhausted: return "BoundExhausted";
  }
  return "?";
}

std::string SymPath::outcome_str() const {
  switch (outcome) {
    case Outcome::Returned: return value ? solve::to_string(value) : "void";
    case Outcome::RuntimeError: return lang::to_string(error);
    case Outcome::BoundExhausted: return "BoundExhausted";
  }
  return "?";
}

solve::Formula SymEnv::formula(const std::vector<Term>& pc, const Term& extra) const {
  solve::Formula f;
  f.decls = inputs;
  std::vector<Term> parts{pre};
  parts.insert(parts.end(), pc.begin(), pc.end());
  if (extra) parts.push_back(extra);
  f.body = solve::conj(parts);
  return f;
}

lang::ExprPtr parse_pre(const lang::Program& prog, const std::string& text) {
  std::map<std::string, lang::Type> scope;
  for (const auto& p : prog.entry_function().params) scope[p.name] = p.type;
  ExprPtr e = lang::parse_expression(text, scope, &prog);
  if (e->type != lang::Type::Bool)
    throw SymError(SymError::Kind::BadPre, "pre-condition must be boolean");
  return e;
}

namespace {

void flatten(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::Binary && e->binop == BinOp::And) {
    flatten(e->args[0], out);
    flatten(e->args[1], out);
  } else {
    out.push_back(e);
  }
}

bool is_len_of(const ExprPtr& e, std::string& arr) {
  if (e->kind != ExprKind::Call || e->name != "len") return false;
  arr = e->args[0]->name;
  return true;
}

std::string input_name(const SymOptions& opts, const lang::Function& fn, std::size_t k) {
  return k < opts.input_names.size() ? opts.input_names[k] : fn.params[k].name;
}

}  // namespace

Term input_term(const lang::Function& fn, const SymEnv& env, const ExprPtr& e,
                const std::vector<std::string>& names) {
  auto index_of = [&](const std::string& n) -> std::size_t {
    for (std::size_t k = 0; k < fn.params.size(); ++k)
      if (fn.params[k].name == n) return k;
    throw SymError(SymError::Kind::BadPre, "pre-condition refers to non-parameter " + n);
  };
  auto sym = [&](const std::string& n) {
    std::size_t k = index_of(n);
    return k < names.size() ? names[k] : n;
  };
  std::function<Term(const ExprPtr&)> go = [&](const ExprPtr& x) -> Term {
    switch (x->kind) {
      case ExprKind::IntLit: return solve::int_const(x->value);
      case ExprKind::BoolLit: return solve::bool_const(x->value != 0);
      case ExprKind::Var:
        return solve::var(sym(x->name),
                          x->type == lang::Type::Bool ? solve::Sort::Bool : solve::Sort::Int);
      case ExprKind::Index:
        return solve::select(solve::var(sym(x->name), solve::Sort::Array), go(x->args[0]));
      case ExprKind::Unary:
        return x->unop == lang::UnOp::Neg ? solve::neg(go(x->args[0])) : solve::lnot(go(x->args[0]));
      case ExprKind::Binary:
        return solve::binary(solve::from_lang(x->binop), go(x->args[0]), go(x->args[1]));
      case ExprKind::Call: {
        if (x->name != "len")
          throw SymError(SymError::Kind::BadPre, "calls are not allowed in pre-conditions");
        std::string s = sym(x->args[0]->name);
        for (const auto& d : env.inputs)
          if (d.name == s) return solve::int_const(d.length);
        throw SymError(SymError::Kind::UnboundedArray, "no length for " + s);
      }
    }
    return solve::bool_const(true);
  };
  return go(e);
}

SymEnv make_env(const lang::Function& fn, const ExprPtr& pre, const SymOptions& opts) {
  SymEnv env;
  env.solver = opts.solver;
  std::vector<ExprPtr> parts;
  if (pre) flatten(pre, parts);

  std::map<std::string, int> lengths;
  std::map<std::string, std::int64_t> fixed;
  for (const auto& c : parts) {
    if (c->kind != ExprKind::Binary || c->binop != BinOp::Eq) continue;
    const ExprPtr& l = c->args[0];
    const ExprPtr& r = c->args[1];
    std::string arr;
    if (is_len_of(l, arr) && r->kind == ExprKind::IntLit) lengths[arr] = static_cast<int>(r->value);
    else if (is_len_of(r, arr) && l->kind == ExprKind::IntLit) lengths[arr] = static_cast<int>(l->value);
    else if (l->kind == ExprKind::Var && l->type == lang::Type::Int && r->kind == ExprKind::IntLit)
      fixed[l->name] = r->value;
    else if (r->kind == ExprKind::Var && r->type == lang::Type::Int && l->kind == ExprKind::IntLit)
      fixed[r->name] = l->value;
  }

  std::vector<std::string> names;
  for (std::size_t k = 0; k < fn.params.size(); ++k) {
    const auto& p = fn.params[k];
    std::string n = input_name(opts, fn, k);
    names.push_back(n);
    solve::Decl d{n, solve::Sort::Int, 0};
    if (p.type == lang::Type::Bool) d.sort = solve::Sort::Bool;
    if (p.type == lang::Type::IntArray) {
      auto it = lengths.find(p.name);
      if (it == lengths.end())
        throw SymError(SymError::Kind::UnboundedArray,
                       "array parameter " + p.name + " needs len(" + p.name + ") == N");
      if (it->second < 0)
        throw SymError(SymError::Kind::UnboundedArray, "negative length for " + p.name);
      d.sort = solve::Sort::Array;
      d.length = it->second;
    }
    if (p.type == lang::Type::Int && fixed.count(p.name)) env.fixed[n] = fixed[p.name];
    env.inputs.push_back(d);
  }
  if (pre) env.pre = solve::simplify_term(input_term(fn, env, pre, names));
  if (solve::check_sat(env.formula({}, nullptr), env.solver).status == solve::Status::Unsat)
    throw SymError(SymError::Kind::InfeasiblePre, "pre-condition is unsatisfiable");
  return env;
}

std::vector<lang::Value> inputs_from_model(const SymEnv& env, const solve::Model& m) {
  std::vector<lang::Value> out;
  for (const auto& d : env.inputs) {
    auto it = m.find(d.name);
    if (it != m.end()) {
      out.push_back(it->second);
      continue;
    }
    switch (d.sort) {
      case solve::Sort::Int: {
        auto f = env.fixed.find(d.name);
        out.push_back(lang::Value::of_int(f == env.fixed.end() ? 0 : f->second));
        break;
      }
      case solve::Sort::Bool: out.push_back(lang::Value::of_bool(false)); break;
      case solve::Sort::Array:
        out.push_back(lang::Value::of_array(std::vector<std::int64_t>(d.length, 0)));
        break;
    }
  }
  return out;
}

solve::Model model_from_inputs(const SymEnv& env, const std::vector<lang::Value>& args) {
  solve::Model m;
  for (std::size_t k = 0; k < env.inputs.size() && k < args.size(); ++k)
    m[env.inputs[k].name] = args[k];
  return m;
}

solve::Status feasible(const SymEnv& env, const SymState& state, const Term& extra) {
  return solve::check_sat(env.formula(state.path_condition, extra), env.solver).status;
}

}  // namespace pathfix::sym
