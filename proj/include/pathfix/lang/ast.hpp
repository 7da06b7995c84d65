#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathfix::lang {

enum class Type { Int, Bool, IntArray, Void };

std::string to_string(Type t);

/// Source position, 1-based.
struct Span {
  int line = 0;
  int col = 0;
};

/// Identity of a statement. `path` is the list of child indices from the
/// function body root: top-level statement i is {i}; the k-th statement of the
/// then-branch (or loop body) of statement i is {i, 0, k}; the else-branch (or
/// for-loop step) uses {i, 1, k}. Inserted guards use a trailing -1.
struct Location {
  std::string function;
  std::vector<int> path;
  Span span;

  bool operator==(const Location& o) const {
    return function == o.function && path == o.path;
  }
  bool operator!=(const Location& o) const { return !(*this == o); }
  bool operator<(const Location& o) const {
    return function != o.function ? function < o.function : path < o.path;
  }

  /// `func:line:col`
  std::string str() const;
  /// Structural form `func@0.1.2`, independent of source spans.
  std::string key() const;
};

enum class UnOp { Neg, Not };
enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
  BitAnd, BitOr, BitXor,
};

const char* spelling(UnOp op);
const char* spelling(BinOp op);
bool is_relational(BinOp op);
bool is_logical(BinOp op);
bool is_arithmetic(BinOp op);
bool is_bitwise(BinOp op);
bool is_commutative(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { IntLit, BoolLit, Var, Index, Unary, Binary, Call };

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  Type type = Type::Int;
  std::int64_t value = 0;  // IntLit / BoolLit
  std::string name;        // Var, Index (array name), Call (callee)
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  std::vector<ExprPtr> args;  // operands, index, call arguments
  Span span;

  static ExprPtr int_lit(std::int64_t v, Span s = {});
  static ExprPtr bool_lit(bool v, Span s = {});
  static ExprPtr var(std::string name, Type t, Span s = {});
  static ExprPtr index(std::string array, ExprPtr idx, Span s = {});
  static ExprPtr unary(UnOp op, ExprPtr e, Span s = {});
  static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r, Span s = {});
  static ExprPtr call(std::string callee, std::vector<ExprPtr> args, Type ret,
                      Span s = {});
};

bool equal(const ExprPtr& a, const ExprPtr& b);
/// Number of operator levels; leaves have depth 0.
int depth(const ExprPtr& e);
/// Variable names read by `e` (array names included), in first-use order.
std::vector<std::string> variables(const ExprPtr& e);
bool contains_call(const ExprPtr& e);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

enum class StmtKind { Decl, Assign, If, While, Return, ExprStmt, Break, Continue };

struct Stmt {
  StmtKind kind = StmtKind::ExprStmt;
  Location loc;
  std::string name;      // Decl / Assign target
  Type decl_type = Type::Int;
  ExprPtr index;         // Assign to a[index]
  ExprPtr expr;          // Decl init, Assign rhs, If/While cond, Return value, call
  Block body;            // If then-branch, While body
  Block alt;             // If else-branch, While step (desugared `for` update)
};

struct Param {
  std::string name;
  Type type = Type::Int;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  Type ret_type = Type::Int;
  Block body;
  Span span;
};

struct Program {
  std::vector<Function> functions;
  std::string entry;

  const Function& entry_function() const;
  const Function* find(const std::string& name) const;
};

/// Error raised by the front end and the interpreter's static checks.
class LangError : public std::runtime_error {
 public:
  enum class Kind {
    SyntaxError,
    TypeError,
    DuplicateDeclaration,
    UnresolvedCall,
    UnresolvedVariable,
    MutualRecursion,
    LocationNotFound,
    ArityMismatch,
  };

  LangError(Kind kind, Span span, const std::string& msg);

  Kind kind() const { return kind_; }
  Span span() const { return span_; }

 private:
  Kind kind_;
  Span span_;
};

const char* to_string(LangError::Kind k);

/// Visits every statement of a block in pre-order.
template <typename F>
void for_each_stmt(const Block& block, F&& f) {
  for (const auto& s : block) {
    f(*s);
    for_each_stmt(s->body, f);
    for_each_stmt(s->alt, f);
  }
}

const Stmt* find_stmt(const Function& fn, const Location& loc);
const Stmt* find_stmt(const Program& prog, const Location& loc);

/// Names assigned anywhere in the block (Decl and Assign targets).
std::vector<std::string> assigned_variables(const Block& block);

}  // namespace pathfix::lang
