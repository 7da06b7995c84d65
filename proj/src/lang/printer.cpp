#include "pathfix/lang/printer.hpp"

#include <sstream>

namespace pathfix::lang {
namespace {

int prec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::BitOr: return 3;
    case BinOp::BitXor: return 4;
    case BinOp::BitAnd: return 5;
    case BinOp::Eq: case BinOp::Ne: return 6;
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 7;
    case BinOp::Add: case BinOp::Sub: return 8;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 9;
  }
  return 0;
}

constexpr int kUnaryPrec = 10;

int prec_of(const Expr& e) {
  if (e.kind == ExprKind::Binary) return prec(e.binop);
  if (e.kind == ExprKind::Unary) return kUnaryPrec;
  if (e.kind == ExprKind::IntLit && e.value < 0) return kUnaryPrec;
  return 11;
}

void emit(const Expr& e, std::ostream& os);

void emit_operand(const Expr& e, int min_prec, std::ostream& os) {
  if (prec_of(e) < min_prec) {
    os << '(';
    emit(e, os);
    os << ')';
  } else {
    emit(e, os);
  }
}

void emit(const Expr& e, std::ostream& os) {
  switch (e.kind) {
    case ExprKind::IntLit:
      os << e.value;
      break;
    case ExprKind::BoolLit:
      os << (e.value ? "true" : "false");
      break;
    case ExprKind::Var:
      os << e.name;
      break;
    case ExprKind::Index:
      os << e.name << '[';
      emit(*e.args[0], os);
      os << ']';
      break;
    case ExprKind::Unary:
      os << spelling(e.unop);
      // `- -x` and `-(-3)` must not fuse into a single token or literal.
      emit_operand(*e.args[0], kUnaryPrec + 1, os);
      break;
    case ExprKind::Binary: {
      int p = prec(e.binop);
      emit_operand(*e.args[0], p, os);
      os << ' ' << spelling(e.binop) << ' ';
      emit_operand(*e.args[1], p + 1, os);
      break;
    }
    case ExprKind::Call:
      os << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        emit(*e.args[i], os);
      }
      os << ')';
      break;
  }
}

void emit_block(const Block& b, int indent, std::ostream& os) {
  os << "{\n";
  for (const auto& s : b) os << to_source(*s, indent + 1);
  os << std::string(indent * 2, ' ') << '}';
}

std::string simple(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Decl:
      return to_string(s.decl_type) + " " + s.name + " = " + to_source(s.expr);
    case StmtKind::Assign:
      return s.name + (s.index ? "[" + to_source(s.index) + "]" : "") + " = " +
             to_source(s.expr);
    default:
      return to_source(s.expr);
  }
}

}  // namespace

std::string to_source(const ExprPtr& e) {
  std::ostringstream os;
  emit(*e, os);
  return os.str();
}

std::string to_source(const Stmt& s, int indent) {
  std::ostringstream os;
  std::string pad(indent * 2, ' ');
  os << pad;
  switch (s.kind) {
    case StmtKind::Decl:
    case StmtKind::Assign:
    case StmtKind::ExprStmt:
      os << simple(s) << ";\n";
      break;
    case StmtKind::If:
      os << "if (" << to_source(s.expr) << ") ";
      emit_block(s.body, indent, os);
      if (!s.alt.empty()) {
        os << " else ";
        emit_block(s.alt, indent, os);
      }
      os << '\n';
      break;
    case StmtKind::While:
      if (s.alt.empty()) {
        os << "while (" << to_source(s.expr) << ") ";
      } else {
        os << "for (; " << to_source(s.expr) << "; " << simple(*s.alt.front()) << ") ";
      }
      emit_block(s.body, indent, os);
      os << '\n';
      break;
    case StmtKind::Return:
      os << "return";
      if (s.expr) os << ' ' << to_source(s.expr);
      os << ";\n";
      break;
    case StmtKind::Break:
      os << "break;\n";
      break;
    case StmtKind::Continue:
      os << "continue;\n";
      break;
  }
  return os.str();
}

std::string to_source(const Function& fn) {
  std::ostringstream os;
  os << to_string(fn.ret_type) << ' ' << fn.name << '(';
  for (std::size_t i = 0; i < fn.params.size(); ++i) {
    if (i) os << ", ";
    const auto& p = fn.params[i];
    if (p.type == Type::IntArray)
      os << "int " << p.name << "[]";
    else
      os << to_string(p.type) << ' ' << p.name;
  }
  os << ") ";
  emit_block(fn.body, 0, os);
  os << '\n';
  return os.str();
}

std::string to_source(const Program& prog) {
  std::string out;
  for (std::size_t i = 0; i < prog.functions.size(); ++i) {
    if (i) out += '\n';
    out += to_source(prog.functions[i]);
  }
  return out;
}

}  // namespace pathfix::lang
