#include "pathfix/lang/patch.hpp"

#include <functional>

#include "pathfix/lang/parser.hpp"

namespace pathfix::lang {
namespace {

using Edit = std::function<void(Block& block, std::size_t idx)>;

bool contains(const Block& b, const Location& at) {
  for (const auto& s : b) {
    if (s->loc == at || contains(s->body, at) || contains(s->alt, at)) return true;
  }
  return false;
}

// Copies the statements on the way to `at` and applies `edit` in the block
// that holds it. Untouched subtrees stay shared.
bool rewrite(Block& block, const Location& at, const Edit& edit) {
  for (std::size_t k = 0; k < block.size(); ++k) {
    const auto& s = block[k];
    if (s->loc == at) {
      edit(block, k);
      return true;
    }
    bool in_body = contains(s->body, at);
    if (in_body || contains(s->alt, at)) {
      auto copy = std::make_shared<Stmt>(*s);
      rewrite(in_body ? copy->body : copy->alt, at, edit);
      block[k] = copy;
      return true;
    }
  }
  return false;
}

Program edit_program(const Program& prog, const Location& at, const Edit& edit) {
  Program out = prog;
  for (auto& fn : out.functions) {
    if (fn.name != at.function) continue;
    if (rewrite(fn.body, at, edit)) {
      check_program(out);
      return out;
    }
  }
  throw LangError(LangError::Kind::LocationNotFound, at.span,
                  "no statement at " + at.key());
}

const Stmt& locate(const Program& prog, const Location& at) {
  const Stmt* s = find_stmt(prog, at);
  if (!s) throw LangError(LangError::Kind::LocationNotFound, at.span, "no statement at " + at.key());
  return *s;
}

}  // namespace

Type hole_type(const Program& prog, const Location& at) {
  const Stmt& s = locate(prog, at);
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::While:
      return Type::Bool;
    case StmtKind::Decl:
    case StmtKind::Assign:
      return s.decl_type;
    case StmtKind::Return:
      if (s.expr) return prog.find(at.function)->ret_type;
      break;
    default:
      break;
  }
  throw LangError(LangError::Kind::LocationNotFound, at.span,
                  "statement at " + at.key() + " has no expression hole");
}

ExprPtr hole_expr(const Program& prog, const Location& at) {
  hole_type(prog, at);
  return locate(prog, at).expr;
}

Program apply_patch(const Program& prog, const Location& at, const ExprPtr& replacement) {
  Type want = hole_type(prog, at);
  if (replacement->type != want)
    throw LangError(LangError::Kind::TypeError, at.span,
                    "patch has type " + to_string(replacement->type) + ", hole expects " +
                        to_string(want));
  return edit_program(prog, at, [&](Block& block, std::size_t k) {
    auto copy = std::make_shared<Stmt>(*block[k]);
    copy->expr = replacement;
    block[k] = copy;
  });
}

Location guard_location(const Location& before) {
  Location g = before;
  g.path.push_back(-1);
  return g;
}

Program insert_guard(const Program& prog, const Location& before, const ExprPtr& guard,
                     const ExprPtr& value) {
  locate(prog, before);
  if (guard->type != Type::Bool)
    throw LangError(LangError::Kind::TypeError, before.span, "guard must be bool");
  return edit_program(prog, before, [&](Block& block, std::size_t k) {
    auto ret = std::make_shared<Stmt>();
    ret->kind = StmtKind::Return;
    ret->expr = value;
    auto g = std::make_shared<Stmt>();
    g->kind = StmtKind::If;
    g->loc = guard_location(before);
    g->expr = guard;
    ret->loc = g->loc;
    ret->loc.path.insert(ret->loc.path.end(), {0, 0});
    g->body.push_back(ret);
    block.insert(block.begin() + static_cast<std::ptrdiff_t>(k), g);
  });
}

}  // namespace pathfix::lang
