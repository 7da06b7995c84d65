#include <algorithm>

#include "pathfix/synth/synth.hpp"

namespace pathfix::synth {

namespace {

using lang::BinOp;
using lang::Expr;
using lang::ExprKind;
using lang::ExprPtr;
using lang::Type;
using lang::UnOp;

struct Node {
  ExprPtr e;
  std::size_t id;
  int depth;
  bool constant;
};

bool is_lit(const ExprPtr& e, std::int64_t v) {
  return e->kind == ExprKind::IntLit && e->value == v;
}

bool negative_lit(const ExprPtr& e) { return e->kind == ExprKind::IntLit && e->value < 0; }

std::vector<BinOp> binops(OpCategory c) {
  switch (c) {
    case OpCategory::Relational: return {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};
    case OpCategory::Logical: return {BinOp::And, BinOp::Or};
    case OpCategory::Arithmetic: return {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
    case OpCategory::Bitwise: return {BinOp::BitAnd, BinOp::BitOr, BinOp::BitXor};
  }
  return {};
}

bool ordered_only(BinOp op) {
  return lang::is_commutative(op) || op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt ||
         op == BinOp::Ge;
}

// Operand filters that drop algebraically redundant shapes.
bool redundant(BinOp op, const Node& l, const Node& r) {
  if (l.constant && r.constant) return true;
  if (lang::equal(l.e, r.e)) return true;
  switch (op) {
    case BinOp::Add: return is_lit(l.e, 0) || is_lit(r.e, 0) || negative_lit(r.e);
    case BinOp::Sub: return is_lit(r.e, 0) || negative_lit(r.e);
    case BinOp::Mul:
      return is_lit(l.e, 0) || is_lit(r.e, 0) || is_lit(l.e, 1) || is_lit(r.e, 1);
    case BinOp::Div:
    case BinOp::Mod: return is_lit(r.e, 0) || is_lit(r.e, 1);
    case BinOp::And:
    case BinOp::Or:
      return l.e->kind == ExprKind::BoolLit || r.e->kind == ExprKind::BoolLit;
    default: return false;
  }
}

class Enumerator {
 public:
  Enumerator(const ComponentPool& pool, const std::function<bool(const ExprPtr&)>& visit)
      : pool_(pool), visit_(visit) {}

  void run() {
    if (!leaves()) return;
    for (int d = 1; d <= pool_.max_depth; ++d)
      if (!level(d)) return;
  }

 private:
  const ComponentPool& pool_;
  const std::function<bool(const ExprPtr&)>& visit_;
  std::vector<Node> ints_, bools_;
  std::size_t next_id_ = 0;

  bool emit(const ExprPtr& e, int d) {
    Node n{e, next_id_++, d, lang::variables(e).empty()};
    bool is_int = e->type == Type::Int;
    if (d < pool_.max_depth) (is_int ? ints_ : bools_).push_back(n);
    if (e->type != pool_.hole_type) return true;
    return visit_(e);
  }

  Type type_of(const std::string& v) const {
    auto it = pool_.types.find(v);
    return it == pool_.types.end() ? Type::Int : it->second;
  }

  bool leaves() {
    for (const auto& v : pool_.variables)
      if (type_of(v) == Type::Int && !emit(Expr::var(v, Type::Int), 0)) return false;
    for (const auto& v : pool_.variables)
      if (type_of(v) == Type::Bool && !emit(Expr::var(v, Type::Bool), 0)) return false;
    for (auto c : pool_.constants)
      if (!emit(Expr::int_lit(c), 0)) return false;
    return emit(Expr::bool_lit(true), 0) && emit(Expr::bool_lit(false), 0);
  }

  // Snapshot of the operands available below depth d.
  static std::vector<Node> below(const std::vector<Node>& bank, int d) {
    std::vector<Node> out;
    for (const auto& n : bank)
      if (n.depth < d) out.push_back(n);
    return out;
  }

  bool level(int d) {
    std::vector<Node> is = below(ints_, d), bs = below(bools_, d);

    for (const auto& v : pool_.variables) {
      if (type_of(v) != Type::IntArray) continue;
      for (const auto& n : is)
        if (n.depth == d - 1 && n.e->kind != ExprKind::Index &&
            !emit(Expr::index(v, n.e), d))
          return false;
    }

    for (auto cat : pool_.operators) {
      bool operands_int = cat != OpCategory::Logical;
      const auto& ops = operands_int ? is : bs;
      auto list = binops(cat);
      for (const auto& l : ops)
        for (const auto& r : ops) {
          if (std::max(l.depth, r.depth) != d - 1) continue;
          for (auto op : list) {
            if (ordered_only(op) && l.id >= r.id) continue;
            if (redundant(op, l, r)) continue;
            if (!emit(Expr::binary(op, l.e, r.e), d)) return false;
          }
        }
      if (cat == OpCategory::Logical) {
        for (const auto& n : bs) {
          if (n.depth != d - 1 || n.constant) continue;
          const auto& e = n.e;
          if (e->kind == ExprKind::Unary) continue;
          if (e->kind == ExprKind::Binary && lang::is_relational(e->binop)) continue;
          if (!emit(Expr::unary(UnOp::Not, e), d)) return false;
        }
      }
      if (cat == OpCategory::Arithmetic && d == 1) {
        for (const auto& n : is)
          if (n.e->kind == ExprKind::Var && !emit(Expr::unary(UnOp::Neg, n.e), d)) return false;
      }
    }
    return true;
  }
};

}  // namespace

void enumerate(const ComponentPool& pool, const std::function<bool(const ExprPtr&)>& visit) {
  Enumerator(pool, visit).run();
}

}  // namespace pathfix::synth
