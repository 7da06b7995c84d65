#include <algorithm>

#include "pathfix/lang/parser.hpp"
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

bool is_const(const Term& t) { return t->op == Op::IntConst || t->op == Op::BoolConst; }

class Builder {
 public:
  Builder(const lang::Program& prog, const cfg::Cfg& cfg, const sym::SymEnv& env,
          const equiv::PathTriplet& t, ExpectedPathConstraint& out)
      : prog_(prog), cfg_(cfg), env_(env), t_(t), out_(out) {
    fn_ = prog.find(cfg.function);
    if (!fn_) throw SpecError(SpecError::Kind::UnsupportedStatement, "unknown function");
    const bool entry = prog.entry == fn_->name;
    std::vector<std::string> assigned = lang::assigned_variables(fn_->body);
    for (std::size_t k = 0; k < fn_->params.size(); ++k) {
      const auto& p = fn_->params[k];
      types_[p.name] = p.type;
      if (p.type == lang::Type::IntArray) length_[p.name] = array_length(p.name, k);
      const bool fixed = std::find(assigned.begin(), assigned.end(), p.name) == assigned.end();
      if (entry && fixed && k < env.inputs.size()) {
        pinned_[p.name] = env.inputs[k].name;
        out_.defs.push_back({SsaDef::Kind::Input, env.inputs[k].name, p.name, -1, p.type});
      }
    }
    lang::for_each_stmt(fn_->body, [&](const lang::Stmt& s) {
      if (s.kind == lang::StmtKind::Decl) types_[s.name] = s.decl_type;
    });
  }

  void run(const SlicedPath& sp) {
    for (std::size_t i = 0; i < sp.steps.size(); ++i) {
      step_ = static_cast<int>(i);
      const SliceStep& st = sp.steps[i];
      for (const auto& v : st.havoc) bump(v, SsaDef::Kind::Havoc);
      const cfg::Node& n = cfg_.nodes[st.node];
      if (st.fault) {
        hole(sp, st, n);
        if (sp.origin.pattern == 3) post_ = solve::bool_const(true);
        continue;
      }
      if (n.kind == cfg::NodeKind::Exit) {
        exit(n);
        continue;
      }
      if (!n.stmt) continue;
      statement(*n.stmt, st);
    }
    if (!post_) post_ = solve::bool_const(true);
    out_.post = post_;
    out_.side = solve::conj(side_);
    out_.lengths = length_;
  }

  Term translate_hint(const lang::ExprPtr& e) { return tr(e, false); }
  std::map<std::string, lang::Type> scope_names() const {
    std::map<std::string, lang::Type> m;
    for (const auto& d : out_.defs) m[d.name] = d.type;
    return m;
  }

 private:
  int array_length(const std::string& name, std::size_t k) const {
    if (prog_.entry == fn_->name && k < env_.inputs.size()) return env_.inputs[k].length;
    for (const auto& d : env_.inputs)
      if (d.sort == Sort::Array && d.name == name) return d.length;
    for (const auto& d : env_.inputs)
      if (d.sort == Sort::Array) return d.length;
    return 0;
  }

  std::string name(const std::string& v) {
    if (auto it = pinned_.find(v); it != pinned_.end()) return it->second;
    auto it = version_.find(v);
    if (it == version_.end()) {
      version_[v] = 0;
      std::string n = v + "_0";
      declare(n, v, SsaDef::Kind::Entry, -1);
      return n;
    }
    return v + "_" + std::to_string(it->second);
  }

  void declare(const std::string& n, const std::string& base, SsaDef::Kind k, int step) {
    lang::Type ty = types_.count(base) ? types_.at(base) : lang::Type::Int;
    out_.defs.push_back({k, n, base, step, ty});
    solve::Decl d{n, sort_of(ty), 0};
    if (ty == lang::Type::IntArray) d.length = length_[base];
    out_.decls.push_back(d);
  }

  std::string bump(const std::string& v, SsaDef::Kind k) {
    name(v);
    int ver = ++version_[v];
    std::string n = v + "_" + std::to_string(ver);
    declare(n, v, k, step_);
    if (types_[v] == lang::Type::IntArray) arrays_[v] = solve::var(n, Sort::Array);
    return n;
  }

  Term array(const std::string& a) {
    if (auto it = arrays_.find(a); it != arrays_.end()) return it->second;
    return solve::var(name(a), Sort::Array);
  }

  Term scalar(const std::string& v) { return solve::var(name(v), sort_of(types_[v])); }

  Term fresh(const std::string& prefix, lang::Type ty) {
    std::string n = prefix + std::to_string(fresh_++);
    out_.defs.push_back({SsaDef::Kind::Free, n, "", step_, ty});
    out_.decls.push_back({n, sort_of(ty), 0});
    return solve::var(n, sort_of(ty));
  }

  void add_side(const Term& t) {
    if (solve::is_true(t)) return;
    Term g = guards_.empty() ? t : solve::implies(solve::conj(guards_), t);
    for (const auto& s : side_)
      if (solve::structurally_equal(s, g)) return;
    side_.push_back(g);
  }

  // `sides` off while translating oracle text and candidates.
  Term tr(const lang::ExprPtr& e, bool sides = true) {
    using K = lang::ExprKind;
    switch (e->kind) {
      case K::IntLit: return solve::int_const(e->value);
      case K::BoolLit: return solve::bool_const(e->value != 0);
      case K::Var:
        if (!sides) return solve::var(e->name, sort_of(e->type));
        return scalar(e->name);
      case K::Index: {
        Term idx = tr(e->args[0], sides);
        Term arr = sides ? array(e->name) : solve::var(e->name, Sort::Array);
        if (sides && !(is_const(idx) && idx->value >= 0 && idx->value < length_[e->name]))
          add_side(solve::conj({solve::binary(Op::Le, solve::int_const(0), idx),
                                solve::binary(Op::Lt, idx, solve::int_const(length_[e->name]))}));
        return solve::select(arr, idx);
      }
      case K::Unary: {
        Term a = tr(e->args[0], sides);
        return e->unop == lang::UnOp::Neg ? solve::neg(a) : solve::lnot(a);
      }
      case K::Binary: {
        Term l = tr(e->args[0], sides);
        if (e->binop == lang::BinOp::And || e->binop == lang::BinOp::Or) {
          guards_.push_back(e->binop == lang::BinOp::And ? l : solve::lnot(l));
          Term r = tr(e->args[1], sides);
          guards_.pop_back();
          return solve::binary(solve::from_lang(e->binop), l, r);
        }
        Term r = tr(e->args[1], sides);
        if (sides && (e->binop == lang::BinOp::Div || e->binop == lang::BinOp::Mod) &&
            !(is_const(r) && r->value != 0))
          add_side(solve::binary(Op::Ne, r, solve::int_const(0)));
        return solve::binary(solve::from_lang(e->binop), l, r);
      }
      case K::Call: {
        if (e->name == "len" && !e->args.empty() && e->args[0]->kind == K::Var)
          return solve::int_const(length_[e->args[0]->name]);
        for (const auto& a : e->args)
          if (a->type != lang::Type::IntArray) tr(a, sides);
        return fresh("call_", e->type);
      }
    }
    return solve::bool_const(true);
  }

  void push(const Term& t, const SliceStep& st, const std::string& defines = "",
            bool is_hole = false) {
    Transition tr;
    tr.term = t;
    tr.node = st.node;
    tr.step = step_;
    tr.defines = defines;
    tr.context = st.context;
    tr.hole = is_hole;
    out_.transitions.push_back(std::move(tr));
  }

  void statement(const lang::Stmt& s, const SliceStep& st) {
    using K = lang::StmtKind;
    switch (s.kind) {
      case K::Decl:
      case K::Assign: {
        if (s.index) {
          Term idx = tr(s.index);
          Term val = tr(s.expr);
          length_guard(s.name, idx);
          arrays_[s.name] = solve::store(array(s.name), idx, val);
          return;
        }
        Term rhs = tr(s.expr);
        std::string n = bump(s.name, SsaDef::Kind::After);
        push(solve::eq(solve::var(n, sort_of(types_[s.name])), rhs), st, n);
        return;
      }
      case K::If:
      case K::While: {
        Term c = tr(s.expr);
        if (!st.polarity) return;
        push(*st.polarity ? c : solve::lnot(c), st);
        return;
      }
      case K::ExprStmt:
        tr(s.expr);
        return;
      case K::Return:
      case K::Break:
      case K::Continue:
        return;
    }
  }

  void length_guard(const std::string& a, const Term& idx) {
    if (is_const(idx) && idx->value >= 0 && idx->value < length_[a]) return;
    add_side(solve::conj({solve::binary(Op::Le, solve::int_const(0), idx),
                          solve::binary(Op::Lt, idx, solve::int_const(length_[a]))}));
  }

  void exit(const cfg::Node& n) {
    Term ret;
    if (n.stmt && n.stmt->expr) ret = tr(n.stmt->expr);
    const bool value_q = prog_.entry == fn_->name &&
                         t_.theta_tgt.kind != equiv::Theta::Kind::Bound &&
                         t_.theta_ref.kind == equiv::Theta::Kind::Value &&
                         t_.theta_ref.value.type != lang::Type::Void && ret;
    if (!value_q) {
      post_ = solve::bool_const(true);
      return;
    }
    Term want = t_.theta_ref.value.type == lang::Type::Bool
                    ? solve::bool_const(t_.theta_ref.value.i != 0)
                    : solve::int_const(t_.theta_ref.value.i);
    post_ = solve::eq(ret, want);
  }

  void hole(const SlicedPath& sp, const SliceStep& st, const cfg::Node& n) {
    Hole& h = out_.hole;
    h.loc = n.loc;
    for (const auto& p : lang::scope_at(*fn_, n.loc)) {
      if (p.type == lang::Type::IntArray) {
        out_.arrays[p.name] = array(p.name);
        continue;
      }
      h.versions[p.name] = name(p.name);
    }
    const lang::Stmt& s = *n.stmt;
    if (sp.origin.pattern == 3) {
      h.kind = HoleKind::Guard;
      h.type = lang::Type::Bool;
      push(solve::var(h.beta, Sort::Bool), st, "", true);
      return;
    }
    if (s.kind == lang::StmtKind::If || s.kind == lang::StmtKind::While) {
      h.kind = HoleKind::Condition;
      h.type = lang::Type::Bool;
      h.negated = st.polarity && !*st.polarity;
      Term b = solve::var(h.beta, Sort::Bool);
      push(h.negated ? solve::lnot(b) : b, st, "", true);
      return;
    }
    if ((s.kind == lang::StmtKind::Assign || s.kind == lang::StmtKind::Decl) && !s.index) {
      h.kind = HoleKind::AssignRhs;
      h.type = types_[s.name];
      std::string v = bump(s.name, SsaDef::Kind::After);
      push(solve::eq(solve::var(v, sort_of(h.type)), solve::var(h.beta, sort_of(h.type))), st, v,
           true);
      return;
    }
    throw SpecError(SpecError::Kind::UnsupportedStatement,
                    "no expression hole at " + n.loc.str());
  }

  const lang::Program& prog_;
  const cfg::Cfg& cfg_;
  const sym::SymEnv& env_;
  const equiv::PathTriplet& t_;
  ExpectedPathConstraint& out_;
  const lang::Function* fn_ = nullptr;
  std::map<std::string, lang::Type> types_;
  std::map<std::string, int> length_;
  std::map<std::string, std::string> pinned_;
  std::map<std::string, int> version_;
  std::map<std::string, Term> arrays_;
  std::vector<Term> side_;
  std::vector<Term> guards_;
  Term post_;
  int step_ = 0;
  int fresh_ = 0;
};

}  // namespace

std::string VersionedVar::name() const { return base + "_" + std::to_string(version); }

ExpectedPathConstraint summarize_constraint(const SlicedPath& sliced,
                                            const equiv::PathTriplet& triplet,
                                            const lang::Program& prog, const cfg::Cfg& cfg,
                                            const sym::SymEnv& env,
                                            const std::optional<OracleHint>& hint) {
  ExpectedPathConstraint c;
  c.triplet_id = triplet.id;
  c.path = sliced;
  Builder b(prog, cfg, env, triplet, c);
  b.run(sliced);
  std::vector<Term> p{triplet.input_condition ? triplet.input_condition : solve::bool_const(true)};
  if (hint) {
    auto scope = b.scope_names();
    for (const auto& inv : hint->invariants) {
      try {
        p.push_back(b.translate_hint(lang::parse_expression(inv, scope)));
      } catch (const std::exception&) {
        // unusable hint text is ignored
      }
    }
  }
  c.pre = solve::conj(p);
  for (const auto& d : c.defs)
    if (d.kind == SsaDef::Kind::Input)
      if (auto it = triplet.witness.find(d.name); it != triplet.witness.end())
        c.instantiation[d.name] = it->second;
  return c;
}

}  // namespace pathfix::specinfer
