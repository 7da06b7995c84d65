#include "pathfix/lang/ast.hpp"

#include <algorithm>
#include <sstream>

namespace pathfix::lang {

std::string to_string(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Bool: return "bool";
    case Type::IntArray: return "int[]";
    case Type::Void: return "void";
  }
  return "?";
}

std::string Location::str() const {
  std::ostringstream os;
  os << function << ':' << span.line << ':' << span.col;
  return os.str();
}

std::string Location::key() const {
  std::ostringstream os;
  os << function << '@';
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) os << '.';
    os << path[i];
  }
  return os.str();
}

const char* spelling(UnOp op) { return op == UnOp::Neg ? "-" : "!"; }

const char* spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
  }
  return "?";
}

bool is_relational(BinOp op) {
  return op == BinOp::Eq || op == BinOp::Ne || op == BinOp::Lt ||
         op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge;
}
bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }
bool is_arithmetic(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul ||
         op == BinOp::Div || op == BinOp::Mod;
}
bool is_bitwise(BinOp op) {
  return op == BinOp::BitAnd || op == BinOp::BitOr || op == BinOp::BitXor;
}
bool is_commutative(BinOp op) {
  switch (op) {
    case BinOp::Add: case BinOp::Mul: case BinOp::Eq: case BinOp::Ne:
    case BinOp::And: case BinOp::Or: case BinOp::BitAnd: case BinOp::BitOr:
    case BinOp::BitXor:
      return true;
    default:
      return false;
  }
}

ExprPtr Expr::int_lit(std::int64_t v, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::IntLit;
  e->type = Type::Int;
  e->value = v;
  e->span = s;
  return e;
}

ExprPtr Expr::bool_lit(bool v, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::BoolLit;
  e->type = Type::Bool;
  e->value = v ? 1 : 0;
  e->span = s;
  return e;
}

ExprPtr Expr::var(std::string name, Type t, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->type = t;
  e->name = std::move(name);
  e->span = s;
  return e;
}

ExprPtr Expr::index(std::string array, ExprPtr idx, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Index;
  e->type = Type::Int;
  e->name = std::move(array);
  e->args.push_back(std::move(idx));
  e->span = s;
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr operand, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Unary;
  e->unop = op;
  e->type = op == UnOp::Neg ? Type::Int : Type::Bool;
  e->args.push_back(std::move(operand));
  e->span = s;
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr l, ExprPtr r, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Binary;
  e->binop = op;
  e->type = (is_relational(op) || is_logical(op)) ? Type::Bool : Type::Int;
  e->args.push_back(std::move(l));
  e->args.push_back(std::move(r));
  e->span = s;
  return e;
}

ExprPtr Expr::call(std::string callee, std::vector<ExprPtr> args, Type ret,
                   Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Call;
  e->type = ret;
  e->name = std::move(callee);
  e->args = std::move(args);
  e->span = s;
  return e;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->type != b->type || a->args.size() != b->args.size())
    return false;
  switch (a->kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
      return a->value == b->value;
    case ExprKind::Var:
      return a->name == b->name;
    case ExprKind::Index:
    case ExprKind::Call:
      if (a->name != b->name) return false;
      break;
    case ExprKind::Unary:
      if (a->unop != b->unop) return false;
      break;
    case ExprKind::Binary:
      if (a->binop != b->binop) return false;
      break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

int depth(const ExprPtr& e) {
  int d = 0;
  for (const auto& a : e->args) d = std::max(d, depth(a));
  switch (e->kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
    case ExprKind::Var:
      return 0;
    default:
      return d + 1;
  }
}

static void collect_vars(const ExprPtr& e, std::vector<std::string>& out) {
  if (e->kind == ExprKind::Var || e->kind == ExprKind::Index) {
    if (std::find(out.begin(), out.end(), e->name) == out.end())
      out.push_back(e->name);
  }
  for (const auto& a : e->args) collect_vars(a, out);
}

std::vector<std::string> variables(const ExprPtr& e) {
  std::vector<std::string> out;
  if (e) collect_vars(e, out);
  return out;
}

bool contains_call(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::Call && e->name != "len") return true;
  for (const auto& a : e->args)
    if (contains_call(a)) return true;
  return false;
}

const Function& Program::entry_function() const {
  const Function* f = find(entry);
  if (!f) throw LangError(LangError::Kind::UnresolvedCall, {}, "no entry function " + entry);
  return *f;
}

const Function* Program::find(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

LangError::LangError(Kind kind, Span span, const std::string& msg)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.col) +
                         ": " + to_string(kind) + ": " + msg),
      kind_(kind),
      span_(span) {}

const char* to_string(LangError::Kind k) {
  switch (k) {
    case LangError::Kind::SyntaxError: return "SyntaxError";
    case LangError::Kind::TypeError: return "TypeError";
    case LangError::Kind::DuplicateDeclaration: return "DuplicateDeclaration";
    case LangError::Kind::UnresolvedCall: return "UnresolvedCall";
    case LangError::Kind::UnresolvedVariable: return "UnresolvedVariable";
    case LangError::Kind::MutualRecursion: return "MutualRecursion";
    case LangError::Kind::LocationNotFound: return "LocationNotFound";
    case LangError::Kind::ArityMismatch: return "ArityMismatch";
  }
  return "?";
}

static const Stmt* find_in(const Block& block, const Location& loc) {
  for (const auto& s : block) {
    if (s->loc == loc) return s.get();
    if (const Stmt* r = find_in(s->body, loc)) return r;
    if (const Stmt* r = find_in(s->alt, loc)) return r;
  }
  return nullptr;
}

const Stmt* find_stmt(const Function& fn, const Location& loc) {
  if (fn.name != loc.function) return nullptr;
  return find_in(fn.body, loc);
}

const Stmt* find_stmt(const Program& prog, const Location& loc) {
  const Function* f = prog.find(loc.function);
  return f ? find_stmt(*f, loc) : nullptr;
}

std::vector<std::string> assigned_variables(const Block& block) {
  std::vector<std::string> out;
  for_each_stmt(block, [&](const Stmt& s) {
    if ((s.kind == StmtKind::Decl || s.kind == StmtKind::Assign) &&
        std::find(out.begin(), out.end(), s.name) == out.end())
      out.push_back(s.name);
  });
  return out;
}

}  // namespace pathfix::lang
