#include <stdexcept>

#include "pathfix/solve/solver.hpp"

namespace pathfix::solve {
namespace {

struct Undefined {};

struct TreeEval {
  const Model& m;

  const lang::Value& lookup(const std::string& n) const {
    auto it = m.find(n);
    if (it == m.end()) throw std::invalid_argument("model does not assign " + n);
    return it->second;
  }

  // Array terms evaluate to their cell vector.
  std::vector<std::int64_t> arr(const Term& t) const {
    switch (t->op) {
      case Op::ArrayLit: return t->elems;
      case Op::Var: return lookup(t->name).arr;
      case Op::Store: {
        auto a = arr(t->args[0]);
        std::int64_t i = num(t->args[1]);
        std::int64_t v = num(t->args[2]);
        if (i < 0 || i >= static_cast<std::int64_t>(a.size())) throw Undefined{};
        a[i] = v;
        return a;
      }
      default: throw std::invalid_argument("not an array term");
    }
  }

  std::int64_t num(const Term& t) const {
    switch (t->op) {
      case Op::IntConst: return t->value;
      case Op::Var: return lookup(t->name).i;
      case Op::Select: {
        auto a = arr(t->args[0]);
        std::int64_t i = num(t->args[1]);
        if (i < 0 || i >= static_cast<std::int64_t>(a.size())) throw Undefined{};
        return a[i];
      }
      case Op::Neg: return static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(num(t->args[0])));
      case Op::Ite: return truth(t->args[0]) ? num(t->args[1]) : num(t->args[2]);
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Mod:
      case Op::BitAnd: case Op::BitOr: case Op::BitXor: {
        std::int64_t a = num(t->args[0]);
        std::int64_t b = num(t->args[1]);
        bool ok = true;
        std::int64_t r = lang::arith(to_lang(t->op), a, b, ok);
        if (!ok) throw Undefined{};
        return r;
      }
      default: throw std::invalid_argument("not an integer term");
    }
  }

  static lang::BinOp to_lang(Op op) {
    switch (op) {
      case Op::Add: return lang::BinOp::Add;
      case Op::Sub: return lang::BinOp::Sub;
      case Op::Mul: return lang::BinOp::Mul;
      case Op::Div: return lang::BinOp::Div;
      case Op::Mod: return lang::BinOp::Mod;
      case Op::BitAnd: return lang::BinOp::BitAnd;
      case Op::BitOr: return lang::BinOp::BitOr;
      default: return lang::BinOp::BitXor;
    }
  }

  bool atom(const Term& t) const {
    try {
      if (t->op == Op::Var) return lookup(t->name).i != 0;
      const Term& a = t->args[0];
      const Term& b = t->args[1];
      if (a->sort == Sort::Bool) {
        bool x = truth(a), y = truth(b);
        return t->op == Op::Eq ? x == y : x != y;
      }
      std::int64_t x = num(a), y = num(b);
      switch (t->op) {
        case Op::Eq: return x == y;
        case Op::Ne: return x != y;
        case Op::Lt: return x < y;
        case Op::Le: return x <= y;
        case Op::Gt: return x > y;
        default: return x >= y;
      }
    } catch (const Undefined&) {
      return false;
    }
  }

  bool truth(const Term& t) const {
    switch (t->op) {
      case Op::BoolConst: return t->value != 0;
      case Op::Var: return atom(t);
      case Op::Not: return !truth(t->args[0]);
      case Op::And: return truth(t->args[0]) && truth(t->args[1]);
      case Op::Or: return truth(t->args[0]) || truth(t->args[1]);
      case Op::Implies: return !truth(t->args[0]) || truth(t->args[1]);
      case Op::Ite: return truth(t->args[0]) ? truth(t->args[1]) : truth(t->args[2]);
      default:
        if (is_atom_op(t->op)) return atom(t);
        throw std::invalid_argument("not a boolean term");
    }
  }
};

}  // namespace

bool evaluate(const Term& t, const Model& m) { return TreeEval{m}.truth(t); }

std::optional<std::int64_t> evaluate_int(const Term& t, const Model& m) {
  try {
    return TreeEval{m}.num(t);
  } catch (const Undefined&) {
    return std::nullopt;
  }
}

}  // namespace pathfix::solve
