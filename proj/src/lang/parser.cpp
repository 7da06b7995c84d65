#include "pathfix/lang/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace pathfix::lang {
namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  Span span;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      Span start{line, col};
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size())
        throw LangError(LangError::Kind::SyntaxError, start, "unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.span = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.number = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw LangError(LangError::Kind::SyntaxError, t.span, "integer literal too large");
      }
      advance(j - i);
    } else {
      static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      for (const char* op : two) {
        if (src.substr(i, 2) == op) t.text = op;
      }
      if (t.text.size() == 1 && std::string_view("(){}[];,=+-*/%<>!&|^").find(c) ==
                                    std::string_view::npos)
        throw LangError(LangError::Kind::SyntaxError, t.span,
                        std::string("unexpected character '") + c + "'");
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.span = {line, col};
  out.push_back(end);
  return out;
}

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"int",   "bool",     "void",   "if",
                                           "else",  "while",    "for",    "return",
                                           "break", "continue", "true",   "false"};
  return kw.count(s) > 0;
}

struct Signature {
  Type ret = Type::Int;
  std::vector<Type> params;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::map<std::string, Signature> sigs)
      : toks_(std::move(toks)), sigs_(std::move(sigs)) {}

  std::vector<Function> parse_functions() {
    std::vector<Function> fns;
    while (peek().kind != Tok::End) fns.push_back(parse_function());
    return fns;
  }

  ExprPtr parse_standalone(const std::map<std::string, Type>& scope) {
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& [n, t] : scope) scopes_.back().push_back({n, t});
    ExprPtr e = parse_expr();
    if (peek().kind != Tok::End) fail(peek().span, "trailing input after expression");
    return e;
  }

  // Collects function signatures without parsing bodies.
  static std::map<std::string, Signature> prescan(const std::vector<Token>& toks) {
    std::map<std::string, Signature> sigs;
    Parser p(toks, {});
    while (p.peek().kind != Tok::End) {
      Span at = p.peek().span;
      Type ret = p.parse_type(true);
      Token name = p.expect_ident();
      if (sigs.count(name.text))
        throw LangError(LangError::Kind::DuplicateDeclaration, name.span,
                        "function '" + name.text + "' redefined");
      Signature sig;
      sig.ret = ret;
      for (const auto& prm : p.parse_params()) sig.params.push_back(prm.type);
      sigs[name.text] = sig;
      if (!p.is_punct("{")) p.fail(at, "expected function body");
      int depth = 0;
      do {
        if (p.is_punct("{")) ++depth;
        if (p.is_punct("}")) --depth;
        if (p.peek().kind == Tok::End) p.fail(p.peek().span, "unterminated function body");
        p.next();
      } while (depth > 0);
    }
    return sigs;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Signature> sigs_;
  std::vector<std::vector<std::pair<std::string, Type>>> scopes_;
  std::string fn_name_;

  [[noreturn]] void fail(Span s, const std::string& msg) const {
    throw LangError(LangError::Kind::SyntaxError, s, msg);
  }

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(const char* w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  bool accept(const char* p) {
    if (is_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(peek().span, std::string("expected '") + p + "'");
  }
  Token expect_ident() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text))
      fail(peek().span, "expected identifier");
    return next();
  }

  Type parse_type(bool allow_void) {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "int") { next(); return Type::Int; }
      if (t.text == "bool") { next(); return Type::Bool; }
      if (t.text == "void" && allow_void) { next(); return Type::Void; }
    }
    fail(t.span, "expected type");
  }

  std::vector<Param> parse_params() {
    std::vector<Param> params;
    expect("(");
    if (!is_punct(")")) {
      do {
        Type t = parse_type(false);
        Token name = expect_ident();
        if (accept("[")) {
          expect("]");
          if (t != Type::Int) fail(name.span, "only int arrays are supported");
          t = Type::IntArray;
        }
        params.push_back({name.text, t});
      } while (accept(","));
    }
    expect(")");
    return params;
  }

  // Scopes. Names must be unique within a function, so lookups never shadow.
  const Type* lookup(const std::string& n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      for (const auto& [name, t] : *it)
        if (name == n) return &t;
    return nullptr;
  }

  Function parse_function() {
    Function fn;
    fn.span = peek().span;
    fn.ret_type = parse_type(true);
    fn.name = expect_ident().text;
    fn_name_ = fn.name;
    fn.params = parse_params();
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : fn.params) scopes_.back().push_back({p.name, p.type});
    fn.body = parse_block({});
    return fn;
  }

  Block parse_block(const std::vector<int>& prefix) {
    expect("{");
    scopes_.emplace_back();
    Block out;
    while (!is_punct("}")) {
      if (peek().kind == Tok::End) fail(peek().span, "expected '}'");
      parse_stmt(prefix, out);
    }
    next();
    scopes_.pop_back();
    return out;
  }

  Block parse_body(const std::vector<int>& prefix) {
    if (is_punct("{")) return parse_block(prefix);
    scopes_.emplace_back();
    Block out;
    parse_stmt(prefix, out);
    scopes_.pop_back();
    return out;
  }

  std::shared_ptr<Stmt> make_stmt(StmtKind k, const std::vector<int>& prefix,
                                  const Block& out, Span span) {
    auto s = std::make_shared<Stmt>();
    s->kind = k;
    s->loc.function = fn_name_;
    s->loc.path = prefix;
    s->loc.path.push_back(static_cast<int>(out.size()));
    s->loc.span = span;
    return s;
  }

  static std::vector<int> child(const std::vector<int>& path, int which) {
    auto p = path;
    p.push_back(which);
    return p;
  }

  // Parses `x = e`, `a[i] = e`, declarations or a call; no trailing ';'.
  std::shared_ptr<Stmt> parse_simple(const std::vector<int>& prefix, const Block& out) {
    Span at = peek().span;
    if (is_word("int") || is_word("bool")) {
      Type t = parse_type(false);
      Token name = expect_ident();
      if (is_punct("[")) fail(name.span, "local arrays are not supported");
      ExprPtr init;
      if (accept("=")) {
        init = parse_expr();
      } else {
        init = t == Type::Int ? Expr::int_lit(0, name.span) : Expr::bool_lit(false, name.span);
      }
      auto s = make_stmt(StmtKind::Decl, prefix, out, at);
      s->name = name.text;
      s->decl_type = t;
      s->expr = init;
      // Declared after the initializer is parsed: `int x = x;` is rejected.
      scopes_.back().push_back({name.text, t});
      return s;
    }
    if (peek().kind == Tok::Ident && !is_keyword(peek().text) &&
        (is_punct("=", 1) || is_punct("[", 1))) {
      Token name = next();
      const Type* t = lookup(name.text);
      if (!t)
        throw LangError(LangError::Kind::UnresolvedVariable, name.span,
                        "undeclared variable '" + name.text + "'");
      auto s = make_stmt(StmtKind::Assign, prefix, out, at);
      s->name = name.text;
      s->decl_type = *t;
      if (accept("[")) {
        s->index = parse_expr();
        expect("]");
        s->decl_type = Type::Int;
      }
      expect("=");
      s->expr = parse_expr();
      return s;
    }
    ExprPtr e = parse_expr();
    auto s = make_stmt(StmtKind::ExprStmt, prefix, out, at);
    s->expr = e;
    return s;
  }

  void parse_stmt(const std::vector<int>& prefix, Block& out) {
    Span at = peek().span;
    if (is_word("if")) {
      next();
      expect("(");
      ExprPtr cond = parse_expr();
      expect(")");
      auto s = make_stmt(StmtKind::If, prefix, out, at);
      s->expr = cond;
      s->body = parse_body(child(s->loc.path, 0));
      if (is_word("else")) {
        next();
        s->alt = parse_body(child(s->loc.path, 1));
      }
      out.push_back(s);
      return;
    }
    if (is_word("while")) {
      next();
      expect("(");
      ExprPtr cond = parse_expr();
      expect(")");
      auto s = make_stmt(StmtKind::While, prefix, out, at);
      s->expr = cond;
      s->body = parse_body(child(s->loc.path, 0));
      out.push_back(s);
      return;
    }
    if (is_word("for")) {
      next();
      expect("(");
      scopes_.emplace_back();
      if (!is_punct(";")) out.push_back(parse_simple(prefix, out));
      expect(";");
      Span cond_at = peek().span;
      ExprPtr cond = is_punct(";") ? Expr::bool_lit(true, cond_at) : parse_expr();
      expect(";");
      auto s = make_stmt(StmtKind::While, prefix, out, at);
      s->loc.span = cond_at;
      s->expr = cond;
      // The step is parsed before the body but may only use names visible
      // at loop entry.
      std::size_t save = pos_;
      int depth = 0;
      while (!(depth == 0 && is_punct(")"))) {
        if (peek().kind == Tok::End) fail(peek().span, "expected ')'");
        if (is_punct("(")) ++depth;
        if (is_punct(")")) --depth;
        next();
      }
      std::size_t step_end = pos_;
      next();
      s->body = parse_body(child(s->loc.path, 0));
      std::size_t after = pos_;
      pos_ = save;
      if (pos_ != step_end) {
        Block step;
        step.push_back(parse_simple(child(s->loc.path, 1), step));
        if (pos_ != step_end) fail(peek().span, "expected ')'");
        s->alt = std::move(step);
      }
      pos_ = after;
      scopes_.pop_back();
      out.push_back(s);
      return;
    }
    if (is_word("return")) {
      next();
      auto s = make_stmt(StmtKind::Return, prefix, out, at);
      if (!is_punct(";")) s->expr = parse_expr();
      expect(";");
      out.push_back(s);
      return;
    }
    if (is_word("break") || is_word("continue")) {
      bool brk = peek().text == "break";
      next();
      expect(";");
      out.push_back(make_stmt(brk ? StmtKind::Break : StmtKind::Continue, prefix, out, at));
      return;
    }
    if (is_punct("{")) fail(at, "nested blocks are only allowed as statement bodies");
    auto s = parse_simple(prefix, out);
    expect(";");
    out.push_back(s);
  }

  // Precedence climbing, lowest first.
  ExprPtr parse_expr() { return parse_binary(0); }

  static int precedence(const std::string& op) {
    static const std::map<std::string, int> prec = {
        {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6},
        {"!=", 6}, {"<", 7},  {"<=", 7}, {">", 7},  {">=", 7}, {"+", 8},
        {"-", 8},  {"*", 9},  {"/", 9},  {"%", 9}};
    auto it = prec.find(op);
    return it == prec.end() ? -1 : it->second;
  }

  static BinOp to_binop(const std::string& op) {
    static const std::map<std::string, BinOp> m = {
        {"+", BinOp::Add},     {"-", BinOp::Sub},    {"*", BinOp::Mul},
        {"/", BinOp::Div},     {"%", BinOp::Mod},    {"==", BinOp::Eq},
        {"!=", BinOp::Ne},     {"<", BinOp::Lt},     {"<=", BinOp::Le},
        {">", BinOp::Gt},      {">=", BinOp::Ge},    {"&&", BinOp::And},
        {"||", BinOp::Or},     {"&", BinOp::BitAnd}, {"|", BinOp::BitOr},
        {"^", BinOp::BitXor}};
    return m.at(op);
  }

  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    while (peek().kind == Tok::Punct) {
      int p = precedence(peek().text);
      if (p < 0 || p < min_prec) break;
      Token op = next();
      ExprPtr rhs = parse_binary(p + 1);
      lhs = Expr::binary(to_binop(op.text), lhs, rhs, op.span);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    Span at = peek().span;
    if (accept("-")) {
      ExprPtr e = parse_unary();
      if (e->kind == ExprKind::IntLit)
        return Expr::int_lit(static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(e->value)), at);
      return Expr::unary(UnOp::Neg, e, at);
    }
    if (accept("!")) return Expr::unary(UnOp::Not, parse_unary(), at);
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token t = peek();
    if (t.kind == Tok::Number) {
      next();
      return Expr::int_lit(t.number, t.span);
    }
    if (accept("(")) {
      ExprPtr e = parse_expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        next();
        return Expr::bool_lit(t.text == "true", t.span);
      }
      if (is_keyword(t.text)) fail(t.span, "unexpected keyword '" + t.text + "'");
      next();
      if (accept("(")) {
        std::vector<ExprPtr> args;
        if (!is_punct(")")) {
          do args.push_back(parse_expr());
          while (accept(","));
        }
        expect(")");
        if (t.text == "len") return Expr::call("len", std::move(args), Type::Int, t.span);
        auto it = sigs_.find(t.text);
        if (it == sigs_.end())
          throw LangError(LangError::Kind::UnresolvedCall, t.span,
                          "call to undefined function '" + t.text + "'");
        return Expr::call(t.text, std::move(args), it->second.ret, t.span);
      }
      const Type* vt = lookup(t.text);
      if (!vt)
        throw LangError(LangError::Kind::UnresolvedVariable, t.span,
                        "undeclared variable '" + t.text + "'");
      if (accept("[")) {
        ExprPtr idx = parse_expr();
        expect("]");
        return Expr::index(t.text, idx, t.span);
      }
      return Expr::var(t.text, *vt, t.span);
    }
    fail(t.span, "expected expression");
  }

  friend std::map<std::string, Signature> signatures_of(const Program& prog);
};

// ---------------------------------------------------------------------------
// Static checks shared by the parser and patch application.

class Checker {
 public:
  explicit Checker(const Program& prog) : prog_(prog) {}

  void run() {
    std::set<std::string> names;
    for (const auto& fn : prog_.functions) {
      if (!names.insert(fn.name).second)
        throw LangError(LangError::Kind::DuplicateDeclaration, fn.span,
                        "function '" + fn.name + "' redefined");
    }
    if (!prog_.find(prog_.entry))
      throw LangError(LangError::Kind::UnresolvedCall, {}, "entry function not found");
    for (const auto& fn : prog_.functions) check_function(fn);
    check_recursion();
  }

  void check_expr_only(const ExprPtr& e, const std::map<std::string, Type>& scope) {
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& [n, t] : scope) scopes_.back().insert({n, t});
    check_expr(*e);
  }

 private:
  const Program& prog_;
  std::vector<std::map<std::string, Type>> scopes_;
  std::set<std::string> fn_names_;
  const Function* fn_ = nullptr;
  std::map<std::string, std::set<std::string>> calls_;

  [[noreturn]] static void type_error(Span s, const std::string& msg) {
    throw LangError(LangError::Kind::TypeError, s, msg);
  }

  const Type* lookup(const std::string& n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void declare(const std::string& n, Type t, Span s) {
    if (!fn_names_.insert(n).second)
      throw LangError(LangError::Kind::DuplicateDeclaration, s,
                      "'" + n + "' is already declared in this function");
    scopes_.back()[n] = t;
  }

  void check_function(const Function& fn) {
    fn_ = &fn;
    fn_names_.clear();
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : fn.params) declare(p.name, p.type, fn.span);
    check_block(fn.body, 0);
  }

  void check_block(const Block& b, int loop_depth) {
    scopes_.emplace_back();
    for (const auto& s : b) check_stmt(*s, loop_depth);
    scopes_.pop_back();
  }

  void expect_type(const Expr& e, Type t, const char* what) {
    Type got = check_expr(e);
    if (got != t)
      type_error(e.span, std::string(what) + " must be " + to_string(t) + ", found " +
                             to_string(got));
  }

  void check_stmt(const Stmt& s, int loop_depth) {
    Span at = s.loc.span;
    switch (s.kind) {
      case StmtKind::Decl:
        if (s.decl_type != Type::Int && s.decl_type != Type::Bool)
          type_error(at, "invalid local type");
        expect_type(*s.expr, s.decl_type, "initializer");
        declare(s.name, s.decl_type, at);
        break;
      case StmtKind::Assign: {
        const Type* t = lookup(s.name);
        if (!t)
          throw LangError(LangError::Kind::UnresolvedVariable, at,
                          "undeclared variable '" + s.name + "'");
        if (s.index) {
          if (*t != Type::IntArray) type_error(at, "'" + s.name + "' is not an array");
          expect_type(*s.index, Type::Int, "array index");
          expect_type(*s.expr, Type::Int, "assigned value");
        } else {
          if (*t == Type::IntArray) type_error(at, "arrays cannot be assigned as a whole");
          expect_type(*s.expr, *t, "assigned value");
        }
        break;
      }
      case StmtKind::If:
        expect_type(*s.expr, Type::Bool, "condition");
        check_block(s.body, loop_depth);
        check_block(s.alt, loop_depth);
        break;
      case StmtKind::While:
        expect_type(*s.expr, Type::Bool, "loop condition");
        // The for-step shares the loop's scope for names declared at entry.
        check_block(s.body, loop_depth + 1);
        check_block(s.alt, loop_depth + 1);
        break;
      case StmtKind::Return:
        if (fn_->ret_type == Type::Void) {
          if (s.expr) type_error(at, "void function returns a value");
        } else {
          if (!s.expr) type_error(at, "missing return value");
          expect_type(*s.expr, fn_->ret_type, "return value");
        }
        break;
      case StmtKind::ExprStmt:
        if (s.expr->kind != ExprKind::Call || s.expr->name == "len")
          type_error(at, "expression statement must be a call");
        check_expr(*s.expr);
        break;
      case StmtKind::Break:
      case StmtKind::Continue:
        if (loop_depth == 0)
          throw LangError(LangError::Kind::SyntaxError, at,
                          "break/continue outside of a loop");
        break;
    }
  }

  Type check_expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        if (e.type != Type::Int) type_error(e.span, "bad literal");
        return Type::Int;
      case ExprKind::BoolLit:
        return Type::Bool;
      case ExprKind::Var: {
        const Type* t = lookup(e.name);
        if (!t)
          throw LangError(LangError::Kind::UnresolvedVariable, e.span,
                          "undeclared variable '" + e.name + "'");
        if (*t != e.type) type_error(e.span, "inconsistent type for '" + e.name + "'");
        return *t;
      }
      case ExprKind::Index: {
        const Type* t = lookup(e.name);
        if (!t)
          throw LangError(LangError::Kind::UnresolvedVariable, e.span,
                          "undeclared variable '" + e.name + "'");
        if (*t != Type::IntArray) type_error(e.span, "'" + e.name + "' is not an array");
        expect_type(*e.args[0], Type::Int, "array index");
        return Type::Int;
      }
      case ExprKind::Unary:
        expect_type(*e.args[0], e.unop == UnOp::Neg ? Type::Int : Type::Bool, "operand");
        return e.unop == UnOp::Neg ? Type::Int : Type::Bool;
      case ExprKind::Binary: {
        BinOp op = e.binop;
        if (is_logical(op)) {
          expect_type(*e.args[0], Type::Bool, "operand");
          expect_type(*e.args[1], Type::Bool, "operand");
          return Type::Bool;
        }
        if (op == BinOp::Eq || op == BinOp::Ne) {
          Type l = check_expr(*e.args[0]);
          Type r = check_expr(*e.args[1]);
          if (l != r || l == Type::IntArray || l == Type::Void)
            type_error(e.span, "operands of equality must have the same scalar type");
          return Type::Bool;
        }
        expect_type(*e.args[0], Type::Int, "operand");
        expect_type(*e.args[1], Type::Int, "operand");
        return is_relational(op) ? Type::Bool : Type::Int;
      }
      case ExprKind::Call: {
        if (e.name == "len") {
          if (e.args.size() != 1 || e.args[0]->kind != ExprKind::Var ||
              e.args[0]->type != Type::IntArray)
            type_error(e.span, "len() takes one array variable");
          check_expr(*e.args[0]);
          return Type::Int;
        }
        const Function* callee = prog_.find(e.name);
        if (!callee)
          throw LangError(LangError::Kind::UnresolvedCall, e.span,
                          "call to undefined function '" + e.name + "'");
        if (callee->params.size() != e.args.size())
          throw LangError(LangError::Kind::ArityMismatch, e.span,
                          "wrong number of arguments to '" + e.name + "'");
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (callee->params[i].type == Type::IntArray &&
              e.args[i]->kind != ExprKind::Var)
            type_error(e.args[i]->span, "array arguments must be variables");
          expect_type(*e.args[i], callee->params[i].type, "argument");
        }
        if (fn_) calls_[fn_->name].insert(e.name);
        return callee->ret_type;
      }
    }
    return Type::Void;
  }

  void check_recursion() {
    // Direct recursion is allowed; any longer cycle is rejected.
    for (const auto& fn : prog_.functions) {
      std::set<std::string> seen;
      std::vector<std::string> stack;
      for (const auto& c : calls_[fn.name])
        if (c != fn.name) stack.push_back(c);
      while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (cur == fn.name)
          throw LangError(LangError::Kind::MutualRecursion, fn.span,
                          "mutual recursion through '" + fn.name + "'");
        if (!seen.insert(cur).second) continue;
        for (const auto& c : calls_[cur])
          if (c != cur) stack.push_back(c);
      }
    }
  }
};

std::map<std::string, Signature> signatures_of(const Program& prog) {
  std::map<std::string, Signature> sigs;
  for (const auto& fn : prog.functions) {
    Signature s;
    s.ret = fn.ret_type;
    for (const auto& p : fn.params) s.params.push_back(p.type);
    sigs[fn.name] = s;
  }
  return sigs;
}

}  // namespace

Program parse_program(std::string_view source) {
  auto toks = lex(source);
  auto sigs = Parser::prescan(toks);
  Parser p(std::move(toks), std::move(sigs));
  Program prog;
  prog.functions = p.parse_functions();
  if (prog.functions.empty())
    throw LangError(LangError::Kind::SyntaxError, {1, 1}, "no functions defined");
  prog.entry = prog.functions.front().name;
  Checker(prog).run();
  return prog;
}

ExprPtr parse_expression(std::string_view text, const std::map<std::string, Type>& scope,
                         const Program* prog) {
  std::map<std::string, Signature> sigs;
  if (prog) sigs = signatures_of(*prog);
  Parser p(lex(text), std::move(sigs));
  ExprPtr e = p.parse_standalone(scope);
  if (prog) {
    Checker c(*prog);
    c.check_expr_only(e, scope);
  } else {
    Program empty;
    Checker c(empty);
    c.check_expr_only(e, scope);
  }
  return e;
}

void check_program(const Program& prog) { Checker(prog).run(); }

std::vector<Param> scope_at(const Function& fn, const Location& loc) {
  std::vector<Param> out = fn.params;
  const Block* block = &fn.body;
  std::size_t d = 0;
  while (block && d < loc.path.size()) {
    int idx = loc.path[d];
    const Block* next = nullptr;
    for (const auto& s : *block) {
      int pos = s->loc.path.size() > d ? s->loc.path[d] : -1;
      if (pos == idx && s->loc.path.size() == d + 1 && d + 1 < loc.path.size()) {
        if (loc.path[d + 1] >= 0) next = loc.path[d + 1] == 0 ? &s->body : &s->alt;
        break;
      }
      if (pos >= idx && pos >= 0) break;
      if (s->kind == StmtKind::Decl) out.push_back({s->name, s->decl_type});
    }
    block = next;
    d += 2;
  }
  return out;
}

}  // namespace pathfix::lang
