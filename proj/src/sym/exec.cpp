#include <optional>

#include "pathfix/sym/sym.hpp"

namespace pathfix::sym {

using lang::BinOp;
using lang::Expr;
using lang::ExprKind;
using lang::RuntimeErrorKind;
using lang::Stmt;
using lang::StmtKind;
using solve::Op;
using solve::Term;

namespace {

enum class Flow { Normal, Break, Continue, Return, Error, Bound };

struct Ctx {
  SymState s;
  std::vector<lang::Location> trace;
  Flow flow = Flow::Normal;
  Term ret;
  RuntimeErrorKind err = RuntimeErrorKind::DivByZero;
  lang::Location err_loc;
  lang::Location ret_loc;
  const lang::Function* fn = nullptr;
  int depth = 0;

  bool live() const { return flow == Flow::Normal; }
};

struct Val {
  Ctx c;
  SymVal v;
};

Term fold(const Term& t) { return solve::simplify_term(t); }

bool is_int(const Term& t, std::int64_t& v) {
  if (t->op != Op::IntConst) return false;
  v = t->value;
  return true;
}

/// True when evaluating `e` can fault or fork.
bool may_fault(const Expr& e) {
  if (e.kind == ExprKind::Index) return true;
  if (e.kind == ExprKind::Call && e.name != "len") return true;
  if (e.kind == ExprKind::Binary && (e.binop == BinOp::Div || e.binop == BinOp::Mod)) return true;
  for (const auto& a : e.args)
    if (may_fault(*a)) return true;
  return false;
}

class Executor {
 public:
  Executor(const lang::Program& prog, const SymEnv& env, const SymOptions& opts)
      : prog_(prog), env_(env), opts_(opts) {}

  std::vector<SymPath> run(const lang::Function& fn, bool& truncated) {
    Ctx c;
    c.fn = &fn;
    for (std::size_t k = 0; k < fn.params.size(); ++k) {
      const auto& d = env_.inputs[k];
      SymVal v;
      switch (d.sort) {
        case solve::Sort::Int: {
          auto f = env_.fixed.find(d.name);
          v.scalar = f != env_.fixed.end() ? solve::int_const(f->second)
                                           : solve::var(d.name, solve::Sort::Int);
          break;
        }
        case solve::Sort::Bool: v.scalar = solve::var(d.name, solve::Sort::Bool); break;
        case solve::Sort::Array:
          v.is_array = true;
          for (int i = 0; i < d.length; ++i)
            v.cells.push_back(solve::select(solve::var(d.name, solve::Sort::Array),
                                            solve::int_const(i)));
          break;
      }
      c.s.store[fn.params[k].name] = v;
    }
    std::vector<SymPath> out;
    for (Ctx& r : finish_call(fn, block(fn.body, std::move(c)))) {
      SymPath p;
      p.input_condition = solve::conj(r.s.path_condition);
      p.state = std::move(r.s);
      p.trace = std::move(r.trace);
      switch (r.flow) {
        case Flow::Error:
          p.outcome = Outcome::RuntimeError;
          p.error = r.err;
          p.error_loc = r.err_loc;
          break;
        case Flow::Bound:
          p.outcome = Outcome::BoundExhausted;
          p.error_loc = r.err_loc;
          break;
        default:
          p.outcome = Outcome::Returned;
          p.value = r.ret;
          p.exit_loc = r.ret_loc;
          break;
      }
      out.push_back(std::move(p));
    }
    truncated = truncated_;
    return out;
  }

 private:
  const lang::Program& prog_;
  const SymEnv& env_;
  const SymOptions& opts_;
  std::size_t leaves_ = 1;
  bool truncated_ = false;

  static void fail(Ctx& c, RuntimeErrorKind k, const lang::Location& loc) {
    c.flow = Flow::Error;
    c.err = k;
    c.err_loc = loc;
  }

  bool tick(Ctx& c, const lang::Location& loc) {
    if (c.s.steps >= opts_.step_fuel) {
      c.flow = Flow::Bound;
      c.err_loc = loc;
      return false;
    }
    ++c.s.steps;
    c.trace.push_back(loc);
    return true;
  }

  bool admit() {
    if (leaves_ >= opts_.max_paths) {
      truncated_ = true;
      return false;
    }
    ++leaves_;
    return true;
  }

  static void assume(Ctx& c, const Term& t) {
    if (solve::is_true(t)) return;
    for (const auto& p : c.s.path_condition)
      if (solve::structurally_equal(p, t)) return;
    c.s.path_condition.push_back(t);
  }

  /// Successor states for the alternatives `conds`, in order. The first
  /// feasible alternative reuses the current leaf; later ones consume budget.
  std::vector<std::pair<Ctx, std::size_t>> split(const Ctx& c, const std::vector<Term>& conds) {
    std::vector<std::pair<Ctx, std::size_t>> out;
    if (opts_.guide) {
      for (std::size_t i = 0; i < conds.size(); ++i)
        if (solve::evaluate(conds[i], *opts_.guide)) {
          Ctx n = c;
          assume(n, conds[i]);
          out.emplace_back(std::move(n), i);
          break;
        }
      return out;
    }
    for (std::size_t i = 0; i < conds.size(); ++i) {
      const Term& t = conds[i];
      if (solve::is_false(t)) continue;
      if (!solve::is_true(t) && feasible(env_, c.s, t) == solve::Status::Unsat) continue;
      if (!out.empty() && !admit()) break;
      Ctx n = c;
      assume(n, t);
      out.emplace_back(std::move(n), i);
    }
    return out;
  }

  std::vector<std::pair<Ctx, bool>> branch(const Ctx& c, const Term& cond) {
    Term t = fold(cond);
    std::vector<std::pair<Ctx, bool>> out;
    if (t->op == Op::BoolConst) {
      out.emplace_back(c, t->value != 0);
      return out;
    }
    for (auto& [n, i] : split(c, {t, fold(solve::lnot(t))})) out.emplace_back(std::move(n), i == 0);
    return out;
  }

  /// Resolves an index into `n` cells: one state per feasible cell, then the
  /// out-of-bounds state (already failed).
  std::vector<std::pair<Ctx, int>> resolve_index(const Ctx& c, const Term& idx, int n,
                                                 const lang::Location& loc) {
    std::vector<std::pair<Ctx, int>> out;
    std::int64_t k;
    if (is_int(idx, k)) {
      out.emplace_back(c, static_cast<int>(k));
      if (k < 0 || k >= n) fail(out.back().first, RuntimeErrorKind::IndexOutOfBounds, loc);
      return out;
    }
    std::vector<Term> conds;
    for (int i = 0; i < n; ++i) conds.push_back(fold(solve::eq(idx, solve::int_const(i))));
    conds.push_back(fold(solve::disj({solve::binary(Op::Lt, idx, solve::int_const(0)),
                                      solve::binary(Op::Ge, idx, solve::int_const(n))})));
    for (auto& [s, i] : split(c, conds)) {
      out.emplace_back(std::move(s), static_cast<int>(i));
      if (static_cast<int>(i) == n) fail(out.back().first, RuntimeErrorKind::IndexOutOfBounds, loc);
    }
    return out;
  }

  static Val dead(Ctx c) { return Val{std::move(c), {}}; }

  static SymVal scalar(Term t) {
    SymVal v;
    v.scalar = std::move(t);
    return v;
  }

  std::vector<Val> eval(const Expr& e, Ctx c, const lang::Location& loc) {
    std::vector<Val> out;
    switch (e.kind) {
      case ExprKind::IntLit:
        out.push_back({std::move(c), scalar(solve::int_const(e.value))});
        return out;
      case ExprKind::BoolLit:
        out.push_back({std::move(c), scalar(solve::bool_const(e.value != 0))});
        return out;
      case ExprKind::Var: {
        SymVal v = c.s.store.at(e.name);
        out.push_back({std::move(c), std::move(v)});
        return out;
      }
      case ExprKind::Index:
        for (Val& iv : eval(*e.args[0], std::move(c), loc)) {
          if (!iv.c.live()) {
            out.push_back(std::move(iv));
            continue;
          }
          int n = static_cast<int>(iv.c.s.store.at(e.name).cells.size());
          for (auto& [s, k] : resolve_index(iv.c, iv.v.scalar, n, loc)) {
            if (!s.live()) {
              out.push_back(dead(std::move(s)));
              continue;
            }
            Term cell = s.s.store.at(e.name).cells[k];
            out.push_back({std::move(s), scalar(cell)});
          }
        }
        return out;
      case ExprKind::Unary:
        for (Val& v : eval(*e.args[0], std::move(c), loc)) {
          if (v.c.live())
            v.v.scalar = fold(e.unop == lang::UnOp::Neg ? solve::neg(v.v.scalar)
                                                        : solve::lnot(v.v.scalar));
          out.push_back(std::move(v));
        }
        return out;
      case ExprKind::Binary:
        return eval_binary(e, std::move(c), loc);
      case ExprKind::Call: {
        if (e.name == "len") {
          auto n = static_cast<std::int64_t>(c.s.store.at(e.args[0]->name).cells.size());
          out.push_back({std::move(c), scalar(solve::int_const(n))});
          return out;
        }
        return eval_call(e, std::move(c), loc);
      }
    }
    return out;
  }

  std::vector<Val> eval_binary(const Expr& e, Ctx c, const lang::Location& loc) {
    std::vector<Val> out;
    bool logical = e.binop == BinOp::And || e.binop == BinOp::Or;
    for (Val& l : eval(*e.args[0], std::move(c), loc)) {
      if (!l.c.live()) {
        out.push_back(std::move(l));
        continue;
      }
      if (logical && may_fault(*e.args[1])) {
        bool is_and = e.binop == BinOp::And;
        for (auto& [s, taken] : branch(l.c, l.v.scalar)) {
          if (taken != is_and) {
            out.push_back({std::move(s), scalar(solve::bool_const(!is_and))});
            continue;
          }
          for (Val& r : eval(*e.args[1], std::move(s), loc)) out.push_back(std::move(r));
        }
        continue;
      }
      for (Val& r : eval(*e.args[1], l.c, loc)) {
        if (!r.c.live()) {
          out.push_back(std::move(r));
          continue;
        }
        Op op = solve::from_lang(e.binop);
        Term d = r.v.scalar;
        if (op == Op::Div || op == Op::Mod) {
          for (auto& [s, nonzero] : branch(r.c, solve::binary(Op::Ne, d, solve::int_const(0)))) {
            if (!nonzero) {
              fail(s, RuntimeErrorKind::DivByZero, loc);
              out.push_back(dead(std::move(s)));
            } else {
              out.push_back({std::move(s), scalar(fold(solve::binary(op, l.v.scalar, d)))});
            }
          }
          continue;
        }
        out.push_back({std::move(r.c), scalar(fold(solve::binary(op, l.v.scalar, d)))});
      }
    }
    return out;
  }

  std::vector<Val> eval_call(const Expr& e, Ctx c, const lang::Location& loc) {
    // Arguments left to right; each may fork.
    std::vector<std::pair<Ctx, std::vector<SymVal>>> frontier;
    frontier.emplace_back(std::move(c), std::vector<SymVal>{});
    std::vector<Val> out;
    for (const auto& a : e.args) {
      std::vector<std::pair<Ctx, std::vector<SymVal>>> next;
      for (auto& [fc, vals] : frontier) {
        for (Val& v : eval(*a, std::move(fc), loc)) {
          if (!v.c.live()) {
            out.push_back(std::move(v));
            continue;
          }
          auto nv = vals;
          nv.push_back(std::move(v.v));
          next.emplace_back(std::move(v.c), std::move(nv));
        }
      }
      frontier = std::move(next);
    }
    const lang::Function& callee = *prog_.find(e.name);
    for (auto& [fc, vals] : frontier) {
      if (fc.depth + 1 > opts_.call_depth) {
        fc.flow = Flow::Bound;
        fc.err_loc = loc;
        out.push_back(dead(std::move(fc)));
        continue;
      }
      auto saved_store = fc.s.store;
      const lang::Function* saved_fn = fc.fn;
      fc.s.store.clear();
      for (std::size_t k = 0; k < callee.params.size(); ++k)
        fc.s.store[callee.params[k].name] = vals[k];
      fc.fn = &callee;
      ++fc.depth;
      for (Ctx& r : finish_call(callee, block(callee.body, std::move(fc)))) {
        r.s.store = saved_store;
        r.fn = saved_fn;
        --r.depth;
        if (!r.live()) {
          out.push_back(dead(std::move(r)));
          continue;
        }
        Term v = r.ret;
        r.ret = nullptr;
        out.push_back({std::move(r), scalar(v)});
      }
    }
    return out;
  }

  /// Turns Return into Normal with the value in `ret`; detects a missing
  /// return.
  std::vector<Ctx> finish_call(const lang::Function& fn, std::vector<Ctx> rs) {
    for (Ctx& r : rs) {
      if (r.flow == Flow::Return) {
        r.flow = Flow::Normal;
      } else if (r.flow == Flow::Normal) {
        if (fn.ret_type != lang::Type::Void)
          fail(r, RuntimeErrorKind::MissingReturn, lang::Location{fn.name, {}, fn.span});
        else {
          r.ret = nullptr;
          r.ret_loc = lang::Location{fn.name, {}, fn.span};
        }
      }
    }
    return rs;
  }

  std::vector<Ctx> block(const lang::Block& b, Ctx c, std::size_t from = 0) {
    std::vector<Ctx> out;
    if (from >= b.size() || !c.live()) {
      out.push_back(std::move(c));
      return out;
    }
    for (Ctx& r : stmt(*b[from], std::move(c))) {
      if (!r.live()) {
        out.push_back(std::move(r));
        continue;
      }
      for (Ctx& t : block(b, std::move(r), from + 1)) out.push_back(std::move(t));
    }
    return out;
  }

  void bump(Ctx& c, const std::string& name) {
    std::string key = c.depth == 0 ? name : c.fn->name + "::" + name;
    ++c.s.version_counter[key];
  }

  std::vector<Ctx> stmt(const Stmt& s, Ctx c) {
    std::vector<Ctx> out;
    const lang::Location& loc = s.loc;
    switch (s.kind) {
      case StmtKind::Decl:
      case StmtKind::Assign: {
        if (!tick(c, loc)) break;
        if (!s.index) {
          for (Val& v : eval(*s.expr, std::move(c), loc)) {
            if (v.c.live()) {
              v.c.s.store[s.name] = std::move(v.v);
              bump(v.c, s.name);
            }
            out.push_back(std::move(v.c));
          }
          return out;
        }
        for (Val& iv : eval(*s.index, std::move(c), loc)) {
          if (!iv.c.live()) {
            out.push_back(std::move(iv.c));
            continue;
          }
          for (Val& rv : eval(*s.expr, std::move(iv.c), loc)) {
            if (!rv.c.live()) {
              out.push_back(std::move(rv.c));
              continue;
            }
            int n = static_cast<int>(rv.c.s.store.at(s.name).cells.size());
            for (auto& [st, k] : resolve_index(rv.c, iv.v.scalar, n, loc)) {
              if (st.live()) {
                st.s.store[s.name].cells[k] = rv.v.scalar;
                bump(st, s.name);
              }
              out.push_back(std::move(st));
            }
          }
        }
        return out;
      }
      case StmtKind::ExprStmt:
        if (!tick(c, loc)) break;
        for (Val& v : eval(*s.expr, std::move(c), loc)) out.push_back(std::move(v.c));
        return out;
      case StmtKind::Return:
        if (!tick(c, loc)) break;
        if (!s.expr) {
          c.flow = Flow::Return;
          c.ret = nullptr;
          c.ret_loc = loc;
          break;
        }
        for (Val& v : eval(*s.expr, std::move(c), loc)) {
          if (v.c.live()) {
            v.c.flow = Flow::Return;
            v.c.ret = v.v.scalar;
            v.c.ret_loc = loc;
          }
          out.push_back(std::move(v.c));
        }
        return out;
      case StmtKind::Break:
      case StmtKind::Continue:
        if (tick(c, loc)) c.flow = s.kind == StmtKind::Break ? Flow::Break : Flow::Continue;
        break;
      case StmtKind::If: {
        if (!tick(c, loc)) break;
        for (Val& v : eval(*s.expr, std::move(c), loc)) {
          if (!v.c.live()) {
            out.push_back(std::move(v.c));
            continue;
          }
          for (auto& [b, taken] : branch(v.c, v.v.scalar))
            for (Ctx& r : block(taken ? s.body : s.alt, std::move(b))) out.push_back(std::move(r));
        }
        return out;
      }
      case StmtKind::While:
        loop(s, std::move(c), 0, out);
        return out;
    }
    out.push_back(std::move(c));
    return out;
  }

  void loop(const Stmt& s, Ctx c, int trips, std::vector<Ctx>& out) {
    if (!tick(c, s.loc)) {
      out.push_back(std::move(c));
      return;
    }
    for (Val& v : eval(*s.expr, std::move(c), s.loc)) {
      if (!v.c.live()) {
        out.push_back(std::move(v.c));
        continue;
      }
      for (auto& [b, taken] : branch(v.c, v.v.scalar)) {
        if (!taken) {
          out.push_back(std::move(b));
          continue;
        }
        if (trips + 1 >= opts_.loop_trips) {
          b.flow = Flow::Bound;
          b.err_loc = s.loc;
          out.push_back(std::move(b));
          continue;
        }
        for (Ctx& r : block(s.body, std::move(b))) {
          if (r.flow == Flow::Break) {
            r.flow = Flow::Normal;
            out.push_back(std::move(r));
          } else if (r.flow == Flow::Normal || r.flow == Flow::Continue) {
            r.flow = Flow::Normal;
            step_then_loop(s, std::move(r), trips + 1, out);
          } else {
            out.push_back(std::move(r));
          }
        }
      }
    }
  }

  void step_then_loop(const Stmt& s, Ctx r, int trips, std::vector<Ctx>& out) {
    for (Ctx& t : block(s.alt, std::move(r))) {
      if (t.live()) loop(s, std::move(t), trips, out);
      else out.push_back(std::move(t));
    }
  }
};

}  // namespace

SymResult sym_execute_in(const lang::Program& prog, const SymEnv& env, const SymOptions& opts,
                         const std::string& function) {
  const lang::Function* fn = function.empty() ? &prog.entry_function() : prog.find(function);
  if (!fn) throw lang::LangError(lang::LangError::Kind::UnresolvedCall, {}, "no function " + function);
  if (fn->params.size() != env.inputs.size())
    throw lang::LangError(lang::LangError::Kind::ArityMismatch, fn->span,
                          fn->name + " does not match the symbolic inputs");
  SymResult res;
  res.env = env;
  Executor ex(prog, res.env, opts);
  res.paths = ex.run(*fn, res.truncated);
  return res;
}

SymResult sym_execute(const lang::Program& prog, const lang::ExprPtr& pre, const SymOptions& opts,
                      const std::string& function) {
  const lang::Function* fn = function.empty() ? &prog.entry_function() : prog.find(function);
  if (!fn) throw lang::LangError(lang::LangError::Kind::UnresolvedCall, {}, "no function " + function);
  return sym_execute_in(prog, make_env(*fn, pre, opts), opts, function);
}

}  // namespace pathfix::sym
