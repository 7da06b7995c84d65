#include "oracles.hpp"

#include <functional>

namespace pathfix::testing {

using namespace solve;

namespace {

std::optional<std::vector<std::int64_t>> oracle_array(const Term& t, const Model& m) {
  if (t->op == Op::ArrayLit) return t->elems;
  if (t->op == Op::Var) return m.at(t->name).arr;
  auto base = oracle_array(t->args[0], m);
  auto i = oracle_int(t->args[1], m);
  if (!base || !i || *i < 0 || *i >= static_cast<std::int64_t>(base->size())) return std::nullopt;
  auto v = oracle_int(t->args[2], m);
  if (!v) return std::nullopt;
  (*base)[*i] = *v;
  return base;
}

std::int64_t wrap(__int128 v) { return static_cast<std::int64_t>(static_cast<std::uint64_t>(v)); }

}  // namespace

std::optional<std::int64_t> oracle_int(const Term& t, const Model& m) {
  const auto& a = t->args;
  switch (t->op) {
    case Op::IntConst: return t->value;
    case Op::Var: return m.at(t->name).i;
    case Op::Select: {
      auto i = oracle_int(a[1], m);
      if (!i) return std::nullopt;
      // A store hitting a different cell may itself be undefined; evaluate
      // the full array to keep this oracle simple.
      auto arr = oracle_array(a[0], m);
      if (!arr || *i < 0 || *i >= static_cast<std::int64_t>(arr->size())) return std::nullopt;
      return (*arr)[*i];
    }
    case Op::Neg: {
      auto x = oracle_int(a[0], m);
      if (!x) return std::nullopt;
      return wrap(-static_cast<__int128>(*x));
    }
    case Op::Ite:
      return oracle_bool(a[0], m) ? oracle_int(a[1], m) : oracle_int(a[2], m);
    default: break;
  }
  auto x = oracle_int(a[0], m);
  auto y = oracle_int(a[1], m);
  if (!x || !y) return std::nullopt;
  __int128 p = *x, q = *y;
  switch (t->op) {
    case Op::Add: return wrap(p + q);
    case Op::Sub: return wrap(p - q);
    case Op::Mul: return wrap(p * q);
    case Op::Div:
      if (q == 0) return std::nullopt;
      return wrap(p / q);
    case Op::Mod:
      if (q == 0) return std::nullopt;
      return wrap(p % q);
    case Op::BitAnd: return *x & *y;
    case Op::BitOr: return *x | *y;
    case Op::BitXor: return *x ^ *y;
    default: return std::nullopt;
  }
}

bool oracle_bool(const Term& t, const Model& m) {
  const auto& a = t->args;
  switch (t->op) {
    case Op::BoolConst: return t->value != 0;
    case Op::Var: return m.at(t->name).i != 0;
    case Op::Not: return !oracle_bool(a[0], m);
    case Op::And: return oracle_bool(a[0], m) && oracle_bool(a[1], m);
    case Op::Or: return oracle_bool(a[0], m) || oracle_bool(a[1], m);
    case Op::Implies: return !oracle_bool(a[0], m) || oracle_bool(a[1], m);
    case Op::Ite: return oracle_bool(a[0], m) ? oracle_bool(a[1], m) : oracle_bool(a[2], m);
    default: break;
  }
  if (a[0]->sort == Sort::Bool) {
    bool eq = oracle_bool(a[0], m) == oracle_bool(a[1], m);
    return t->op == Op::Eq ? eq : !eq;
  }
  auto x = oracle_int(a[0], m);
  auto y = oracle_int(a[1], m);
  if (!x || !y) return false;
  switch (t->op) {
    case Op::Eq: return *x == *y;
    case Op::Ne: return *x != *y;
    case Op::Lt: return *x < *y;
    case Op::Le: return *x <= *y;
    case Op::Gt: return *x > *y;
    default: return *x >= *y;
  }
}

BruteResult brute_force(const Formula& f, int bound) {
  std::vector<std::int64_t> ints{0};
  for (int k = 1; k <= bound; ++k) {
    ints.push_back(k);
    ints.push_back(-k);
  }
  struct Cell {
    std::string name;
    int index;  // -1 for scalars
    bool is_bool;
  };
  std::vector<Cell> cells;
  Model m;
  for (const auto& d : f.decls) {
    if (d.sort == Sort::Array) {
      m[d.name] = lang::Value::of_array(std::vector<std::int64_t>(d.length, 0));
      for (int k = 0; k < d.length; ++k) cells.push_back({d.name, k, false});
    } else {
      m[d.name] = d.sort == Sort::Bool ? lang::Value::of_bool(false) : lang::Value::of_int(0);
      cells.push_back({d.name, -1, d.sort == Sort::Bool});
    }
  }
  BruteResult r;
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == cells.size()) {
      ++r.tried;
      return oracle_bool(f.body, m);
    }
    const Cell& c = cells[k];
    std::vector<std::int64_t> dom = c.is_bool ? std::vector<std::int64_t>{0, 1} : ints;
    for (auto v : dom) {
      if (c.index >= 0)
        m[c.name].arr[c.index] = v;
      else
        m[c.name].i = v;
      if (go(k + 1)) return true;
    }
    return false;
  };
  r.sat = go(0);
  if (r.sat) r.first = m;
  return r;
}

Formula random_formula(std::mt19937& rng, int nvars, int depth) {
  Formula f;
  std::uniform_int_distribution<int> pick(0, 99);
  std::vector<Term> ints, bools;
  for (int k = 0; k < nvars; ++k) {
    bool b = pick(rng) < 15;
    std::string name = std::string(1, static_cast<char>('p' + k));
    f.decls.push_back({name, b ? Sort::Bool : Sort::Int, 0});
    (b ? bools : ints).push_back(var(name, b ? Sort::Bool : Sort::Int));
  }
  if (ints.empty()) {
    f.decls.push_back({"z", Sort::Int, 0});
    ints.push_back(var("z", Sort::Int));
  }
  std::function<Term(int)> gen_int;
  std::function<Term(int)> gen_bool;
  gen_int = [&](int d) -> Term {
    int r = pick(rng);
    if (d == 0 || r < 30) {
      if (r % 3 == 0) return int_const(std::uniform_int_distribution<int>(-3, 3)(rng));
      return ints[r % ints.size()];
    }
    static const Op ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Mod,
                             Op::BitAnd, Op::BitOr, Op::BitXor};
    if (r < 36) return neg(gen_int(d - 1));
    if (r < 42) return ite(gen_bool(d - 1), gen_int(d - 1), gen_int(d - 1));
    Op op = ops[r % 8];
    return binary(op, gen_int(d - 1), gen_int(d - 1));
  };
  gen_bool = [&](int d) -> Term {
    int r = pick(rng);
    if (!bools.empty() && r < 10) return bools[r % bools.size()];
    static const Op rel[] = {Op::Eq, Op::Ne, Op::Lt, Op::Le, Op::Gt, Op::Ge};
    if (d == 0 || r < 55) return binary(rel[r % 6], gen_int(d), gen_int(d));
    if (r < 62) return lnot(gen_bool(d - 1));
    static const Op logic[] = {Op::And, Op::Or, Op::Implies};
    return binary(logic[r % 3], gen_bool(d - 1), gen_bool(d - 1));
  };
  std::vector<Term> cs;
  int n = 1 + pick(rng) % 3;
  for (int k = 0; k < n; ++k) cs.push_back(gen_bool(depth));
  f.body = conj(cs);
  return f;
}

}  // namespace pathfix::testing
