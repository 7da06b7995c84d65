#include "pathfix/solve/term.hpp"

#include <sstream>
#include <stdexcept>

namespace pathfix::solve {
namespace {

Term make(Op op, Sort sort, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->sort = sort;
  n->args = std::move(args);
  return n;
}

void need(const Term& t, Sort s, const char* what) {
  if (t->sort != s) throw std::invalid_argument(std::string("ill-sorted term: ") + what);
}

}  // namespace

Term int_const(std::int64_t v) {
  auto n = std::make_shared<TermNode>();
  n->op = Op::IntConst;
  n->value = v;
  return n;
}

Term bool_const(bool v) {
  auto n = std::make_shared<TermNode>();
  n->op = Op::BoolConst;
  n->sort = Sort::Bool;
  n->value = v;
  return n;
}

Term array_lit(std::vector<std::int64_t> elems) {
  auto n = std::make_shared<TermNode>();
  n->op = Op::ArrayLit;
  n->sort = Sort::Array;
  n->elems = std::move(elems);
  return n;
}

Term var(const std::string& name, Sort sort) {
  auto n = std::make_shared<TermNode>();
  n->op = Op::Var;
  n->sort = sort;
  n->name = name;
  return n;
}

Term select(Term array, Term index) {
  need(array, Sort::Array, "select array");
  need(index, Sort::Int, "select index");
  return make(Op::Select, Sort::Int, {std::move(array), std::move(index)});
}

Term store(Term array, Term index, Term value) {
  need(array, Sort::Array, "store array");
  need(index, Sort::Int, "store index");
  need(value, Sort::Int, "store value");
  return make(Op::Store, Sort::Array, {std::move(array), std::move(index), std::move(value)});
}

Term neg(Term t) {
  need(t, Sort::Int, "neg");
  return make(Op::Neg, Sort::Int, {std::move(t)});
}

Term lnot(Term t) {
  need(t, Sort::Bool, "not");
  return make(Op::Not, Sort::Bool, {std::move(t)});
}

bool is_atom_op(Op op) {
  return op == Op::Eq || op == Op::Ne || op == Op::Lt || op == Op::Le || op == Op::Gt ||
         op == Op::Ge;
}

Term binary(Op op, Term a, Term b) {
  switch (op) {
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Mod:
    case Op::BitAnd: case Op::BitOr: case Op::BitXor:
      need(a, Sort::Int, "arith");
      need(b, Sort::Int, "arith");
      return make(op, Sort::Int, {std::move(a), std::move(b)});
    case Op::Eq: case Op::Ne:
      if (a->sort != b->sort || a->sort == Sort::Array)
        throw std::invalid_argument("ill-sorted equality");
      return make(op, Sort::Bool, {std::move(a), std::move(b)});
    case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
      need(a, Sort::Int, "compare");
      need(b, Sort::Int, "compare");
      return make(op, Sort::Bool, {std::move(a), std::move(b)});
    case Op::And: case Op::Or: case Op::Implies:
      need(a, Sort::Bool, "logic");
      need(b, Sort::Bool, "logic");
      return make(op, Sort::Bool, {std::move(a), std::move(b)});
    default:
      throw std::invalid_argument("not a binary operator");
  }
}

Term ite(Term c, Term a, Term b) {
  need(c, Sort::Bool, "ite condition");
  if (a->sort != b->sort || a->sort == Sort::Array)
    throw std::invalid_argument("ill-sorted ite");
  Sort s = a->sort;
  return make(Op::Ite, s, {std::move(c), std::move(a), std::move(b)});
}

Term conj(const std::vector<Term>& ts) {
  std::vector<Term> flat;
  for (const auto& t : ts) {
    for (const auto& c : conjuncts(t))
      if (!is_true(c)) flat.push_back(c);
  }
  if (flat.empty()) return bool_const(true);
  Term out = flat[0];
  for (std::size_t i = 1; i < flat.size(); ++i) out = binary(Op::And, out, flat[i]);
  return out;
}

Term disj(const std::vector<Term>& ts) {
  std::vector<Term> flat;
  for (const auto& t : ts)
    if (!is_false(t)) flat.push_back(t);
  if (flat.empty()) return bool_const(false);
  Term out = flat[0];
  for (std::size_t i = 1; i < flat.size(); ++i) out = binary(Op::Or, out, flat[i]);
  return out;
}

Term implies(Term a, Term b) { return binary(Op::Implies, std::move(a), std::move(b)); }
Term eq(Term a, Term b) { return binary(Op::Eq, std::move(a), std::move(b)); }

Op from_lang(lang::BinOp op) {
  using B = lang::BinOp;
  switch (op) {
    case B::Add: return Op::Add;
    case B::Sub: return Op::Sub;
    case B::Mul: return Op::Mul;
    case B::Div: return Op::Div;
    case B::Mod: return Op::Mod;
    case B::Eq: return Op::Eq;
    case B::Ne: return Op::Ne;
    case B::Lt: return Op::Lt;
    case B::Le: return Op::Le;
    case B::Gt: return Op::Gt;
    case B::Ge: return Op::Ge;
    case B::And: return Op::And;
    case B::Or: return Op::Or;
    case B::BitAnd: return Op::BitAnd;
    case B::BitOr: return Op::BitOr;
    case B::BitXor: return Op::BitXor;
  }
  return Op::Add;
}

bool structurally_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->op != b->op || a->sort != b->sort || a->value != b->value || a->name != b->name ||
      a->elems != b->elems || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

namespace {

int prec(Op op) {
  switch (op) {
    case Op::Implies: return 0;
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::BitOr: return 3;
    case Op::BitXor: return 4;
    case Op::BitAnd: return 5;
    case Op::Eq: case Op::Ne: return 6;
    case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: return 7;
    case Op::Add: case Op::Sub: return 8;
    case Op::Mul: case Op::Div: case Op::Mod: return 9;
    case Op::Neg: case Op::Not: return 10;
    default: return 11;
  }
}

const char* spelling(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Mod: return "%";
    case Op::BitAnd: return "&";
    case Op::BitOr: return "|";
    case Op::BitXor: return "^";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::Implies: return "=>";
    default: return "?";
  }
}

void print(const Term& t, std::ostream& os);

void operand(const Term& t, int min_prec, std::ostream& os) {
  int p = prec(t->op);
  if (t->op == Op::IntConst && t->value < 0) p = 10;
  if (p < min_prec) {
    os << '(';
    print(t, os);
    os << ')';
  } else {
    print(t, os);
  }
}

void print(const Term& t, std::ostream& os) {
  switch (t->op) {
    case Op::IntConst: os << t->value; return;
    case Op::BoolConst: os << (t->value ? "true" : "false"); return;
    case Op::ArrayLit:
      os << '{';
      for (std::size_t i = 0; i < t->elems.size(); ++i) os << (i ? "," : "") << t->elems[i];
      os << '}';
      return;
    case Op::Var: os << t->name; return;
    case Op::Select:
      operand(t->args[0], 11, os);
      os << '[';
      print(t->args[1], os);
      os << ']';
      return;
    case Op::Store:
      os << "store(";
      print(t->args[0], os);
      os << ", ";
      print(t->args[1], os);
      os << ", ";
      print(t->args[2], os);
      os << ')';
      return;
    case Op::Neg:
    case Op::Not:
      os << (t->op == Op::Neg ? "-" : "!");
      operand(t->args[0], 11, os);
      return;
    case Op::Ite:
      os << "ite(";
      print(t->args[0], os);
      os << ", ";
      print(t->args[1], os);
      os << ", ";
      print(t->args[2], os);
      os << ')';
      return;
    default: {
      int p = prec(t->op);
      // `=>` associates to the right, everything else to the left.
      bool right = t->op == Op::Implies;
      operand(t->args[0], right ? p + 1 : p, os);
      os << ' ' << spelling(t->op) << ' ';
      operand(t->args[1], right ? p : p + 1, os);
    }
  }
}

void collect(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t->op == Op::Var && seen.insert(t->name).second) out.push_back(t->name);
  for (const auto& a : t->args) collect(a, out, seen);
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(t, os);
  return os.str();
}

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect(t, out, seen);
  return out;
}

Term rewrite(const Term& t, const std::function<Term(const Term&)>& f) {
  if (t->args.empty()) return f(t);
  std::vector<Term> args;
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(rewrite(a, f));
    changed = changed || args.back() != a;
  }
  if (!changed) return f(t);
  auto n = std::make_shared<TermNode>(*t);
  n->args = std::move(args);
  return f(n);
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (sub.empty()) return t;
  return rewrite(t, [&](const Term& n) -> Term {
    if (n->op != Op::Var) return n;
    auto it = sub.find(n->name);
    if (it == sub.end()) return n;
    if (it->second->sort != n->sort)
      throw std::invalid_argument("ill-sorted substitution for " + n->name);
    return it->second;
  });
}

std::vector<Term> conjuncts(const Term& t) {
  std::vector<Term> out;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term c = stack.back();
    stack.pop_back();
    if (c->op == Op::And) {
      stack.push_back(c->args[1]);
      stack.push_back(c->args[0]);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace pathfix::solve
