#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pathfix/lang/ast.hpp"

namespace pathfix::solve {

enum class Sort { Int, Bool, Array };

enum class Op {
  IntConst, BoolConst, ArrayLit, Var,
  Select, Store,
  Neg, Not,
  Add, Sub, Mul, Div, Mod, BitAnd, BitOr, BitXor,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Implies, Ite,
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Op op = Op::IntConst;
  Sort sort = Sort::Int;
  std::int64_t value = 0;            // IntConst, BoolConst
  std::string name;                  // Var
  std::vector<std::int64_t> elems;   // ArrayLit
  std::vector<Term> args;
};

Term int_const(std::int64_t v);
Term bool_const(bool v);
Term array_lit(std::vector<std::int64_t> elems);
Term var(const std::string& name, Sort sort);
Term select(Term array, Term index);
Term store(Term array, Term index, Term value);
Term neg(Term t);
Term lnot(Term t);
Term binary(Op op, Term a, Term b);
Term ite(Term c, Term a, Term b);
Term conj(const std::vector<Term>& ts);
Term disj(const std::vector<Term>& ts);
Term implies(Term a, Term b);
Term eq(Term a, Term b);

Op from_lang(lang::BinOp op);
bool is_atom_op(Op op);

inline bool is_true(const Term& t) { return t->op == Op::BoolConst && t->value; }
inline bool is_false(const Term& t) { return t->op == Op::BoolConst && !t->value; }

bool structurally_equal(const Term& a, const Term& b);

/// Infix rendering with minimal parentheses: `m_1 == (L_1 + R_0) / 2`.
std::string to_string(const Term& t);

/// Names of free variables in first-occurrence order.
std::vector<std::string> free_vars(const Term& t);

/// Replaces variables by name. Unmapped variables are kept.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);

/// Bottom-up rewrite; `f` sees each node after its children were rewritten.
Term rewrite(const Term& t, const std::function<Term(const Term&)>& f);

/// Top-level conjuncts, with nested conjunctions flattened.
std::vector<Term> conjuncts(const Term& t);

}  // namespace pathfix::solve
