#include "pathfix/lang/interpreter.hpp"

#include <functional>
#include <limits>
#include <sstream>

namespace pathfix::lang {

std::string Value::str() const {
  switch (type) {
    case Type::Int: return std::to_string(i);
    case Type::Bool: return i ? "true" : "false";
    case Type::IntArray: {
      std::string s = "[";
      for (std::size_t k = 0; k < arr.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(arr[k]);
      }
      return s + "]";
    }
    case Type::Void: return "void";
  }
  return "?";
}

const char* to_string(RuntimeErrorKind k) {
  switch (k) {
    case RuntimeErrorKind::DivByZero: return "DivByZero";
    case RuntimeErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case RuntimeErrorKind::MissingReturn: return "MissingReturn";
    case RuntimeErrorKind::StackOverflow: return "StackOverflow";
  }
  return "?";
}

std::string ExecResult::str() const {
  switch (outcome) {
    case Outcome::Returned: return value.str();
    case Outcome::RuntimeError:
      return std::string(to_string(error)) + "@" + error_loc.str();
    case Outcome::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

bool ExecResult::same_outcome(const ExecResult& o) const {
  if (outcome != o.outcome) return false;
  if (outcome == Outcome::Returned) return value == o.value;
  if (outcome == Outcome::RuntimeError) return error == o.error;
  return true;
}

std::int64_t arith(BinOp op, std::int64_t a, std::int64_t b, bool& ok) {
  auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
  switch (op) {
    case BinOp::Add: return static_cast<std::int64_t>(ua + ub);
    case BinOp::Sub: return static_cast<std::int64_t>(ua - ub);
    case BinOp::Mul: return static_cast<std::int64_t>(ua * ub);
    case BinOp::Div:
      if (b == 0) { ok = false; return 0; }
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;
      return a / b;
    case BinOp::Mod:
      if (b == 0) { ok = false; return 0; }
      if (b == -1) return 0;
      return a % b;
    case BinOp::BitAnd: return a & b;
    case BinOp::BitOr: return a | b;
    case BinOp::BitXor: return a ^ b;
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    case BinOp::Lt: return a < b;
    case BinOp::Le: return a <= b;
    case BinOp::Gt: return a > b;
    case BinOp::Ge: return a >= b;
    case BinOp::And: return a && b;
    case BinOp::Or: return a || b;
  }
  return 0;
}

namespace {

struct Stop {
  Outcome outcome;
  RuntimeErrorKind error = RuntimeErrorKind::DivByZero;
  Location loc;
};

enum class Flow { Normal, Break, Continue, Return };

using Frame = std::map<std::string, Value>;

class Interp {
 public:
  Interp(const Program& prog, std::uint64_t fuel, const InterpOptions& opts)
      : prog_(prog), fuel_(fuel), opts_(opts) {}

  ExecResult run(const Function& fn, const std::vector<Value>& inputs) {
    ExecResult r;
    try {
      r.value = call(fn, inputs, 0);
      r.outcome = Outcome::Returned;
    } catch (const Stop& s) {
      r.outcome = s.outcome;
      r.error = s.error;
      r.error_loc = s.loc;
    }
    r.trace = std::move(trace_);
    r.steps = steps_;
    return r;
  }

 private:
  const Program& prog_;
  std::uint64_t fuel_;
  InterpOptions opts_;
  std::uint64_t steps_ = 0;
  std::vector<TraceEntry> trace_;
  int depth_ = 0;
  std::uint64_t frame_ = 0;
  std::uint64_t frames_ = 0;
  Location cur_;

  [[noreturn]] void error(RuntimeErrorKind k) const {
    throw Stop{Outcome::RuntimeError, k, cur_};
  }

  void tick() {
    if (steps_ >= fuel_) throw Stop{Outcome::FuelExhausted, {}, cur_};
    ++steps_;
  }

  void record(const Frame& f, std::optional<bool> branch = std::nullopt) {
    if (opts_.trace) trace_.push_back({cur_, f, branch, depth_, frame_});
  }

  Value call(const Function& fn, const std::vector<Value>& args, int depth) {
    if (opts_.call_bound && depth > *opts_.call_bound)
      throw Stop{Outcome::FuelExhausted, {}, cur_};
    if (depth > kMaxCallDepth) error(RuntimeErrorKind::StackOverflow);
    Frame frame;
    for (std::size_t k = 0; k < fn.params.size(); ++k) frame[fn.params[k].name] = args[k];
    Value ret;
    int outer = depth_;
    std::uint64_t outer_frame = frame_;
    depth_ = depth;
    frame_ = frames_++;
    Flow f = exec_block(fn.body, frame, depth, ret);
    depth_ = outer;
    frame_ = outer_frame;
    if (f != Flow::Return && fn.ret_type != Type::Void) {
      cur_ = Location{fn.name, {}, fn.span};
      error(RuntimeErrorKind::MissingReturn);
    }
    return fn.ret_type == Type::Void ? Value::void_value() : ret;
  }

  Flow exec_block(const Block& b, Frame& frame, int depth, Value& ret) {
    for (const auto& s : b) {
      Flow f = exec(*s, frame, depth, ret);
      if (f != Flow::Normal) return f;
    }
    return Flow::Normal;
  }

  Flow exec(const Stmt& s, Frame& frame, int depth, Value& ret) {
    cur_ = s.loc;
    switch (s.kind) {
      case StmtKind::Decl:
      case StmtKind::Assign: {
        tick();
        if (s.index) {
          std::int64_t idx = eval(*s.index, frame, depth).i;
          Value v = eval(*s.expr, frame, depth);
          auto& arr = frame[s.name].arr;
          cur_ = s.loc;
          if (idx < 0 || static_cast<std::uint64_t>(idx) >= arr.size())
            error(RuntimeErrorKind::IndexOutOfBounds);
          arr[idx] = v.i;
        } else {
          Value v = eval(*s.expr, frame, depth);
          frame[s.name] = v;
        }
        cur_ = s.loc;
        record(frame);
        return Flow::Normal;
      }
      case StmtKind::ExprStmt:
        tick();
        eval(*s.expr, frame, depth);
        cur_ = s.loc;
        record(frame);
        return Flow::Normal;
      case StmtKind::Return:
        tick();
        ret = s.expr ? eval(*s.expr, frame, depth) : Value::void_value();
        cur_ = s.loc;
        record(frame);
        return Flow::Return;
      case StmtKind::Break:
        tick();
        record(frame);
        return Flow::Break;
      case StmtKind::Continue:
        tick();
        record(frame);
        return Flow::Continue;
      case StmtKind::If: {
        tick();
        bool c = eval(*s.expr, frame, depth).i != 0;
        cur_ = s.loc;
        record(frame, c);
        return exec_block(c ? s.body : s.alt, frame, depth, ret);
      }
      case StmtKind::While: {
        int trips = 0;
        for (;;) {
          cur_ = s.loc;
          tick();
          bool c = eval(*s.expr, frame, depth).i != 0;
          cur_ = s.loc;
          record(frame, c);
          if (!c) return Flow::Normal;
          if (opts_.loop_bound && ++trips >= *opts_.loop_bound)
            throw Stop{Outcome::FuelExhausted, {}, s.loc};
          Flow f = exec_block(s.body, frame, depth, ret);
          if (f == Flow::Return) return f;
          if (f == Flow::Break) return Flow::Normal;
          f = exec_block(s.alt, frame, depth, ret);
          if (f == Flow::Return) return f;
        }
      }
    }
    return Flow::Normal;
  }

  Value eval(const Expr& e, Frame& frame, int depth) {
    switch (e.kind) {
      case ExprKind::IntLit: return Value::of_int(e.value);
      case ExprKind::BoolLit: return Value::of_bool(e.value != 0);
      case ExprKind::Var: return frame[e.name];
      case ExprKind::Index: {
        std::int64_t idx = eval(*e.args[0], frame, depth).i;
        const auto& arr = frame[e.name].arr;
        if (idx < 0 || static_cast<std::uint64_t>(idx) >= arr.size())
          error(RuntimeErrorKind::IndexOutOfBounds);
        return Value::of_int(arr[idx]);
      }
      case ExprKind::Unary: {
        Value v = eval(*e.args[0], frame, depth);
        if (e.unop == UnOp::Not) return Value::of_bool(v.i == 0);
        return Value::of_int(static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(v.i)));
      }
      case ExprKind::Binary: {
        Value l = eval(*e.args[0], frame, depth);
        if (e.binop == BinOp::And && !l.i) return Value::of_bool(false);
        if (e.binop == BinOp::Or && l.i) return Value::of_bool(true);
        Value r = eval(*e.args[1], frame, depth);
        bool ok = true;
        std::int64_t v = arith(e.binop, l.i, r.i, ok);
        if (!ok) error(RuntimeErrorKind::DivByZero);
        return e.type == Type::Bool ? Value::of_bool(v != 0) : Value::of_int(v);
      }
      case ExprKind::Call: {
        if (e.name == "len")
          return Value::of_int(static_cast<std::int64_t>(frame[e.args[0]->name].arr.size()));
        std::vector<Value> args;
        for (const auto& a : e.args) args.push_back(eval(*a, frame, depth));
        Location saved = cur_;
        Value v = call(*prog_.find(e.name), args, depth + 1);
        cur_ = saved;
        return v;
      }
    }
    return {};
  }
};

void check_inputs(const Function& fn, const std::vector<Value>& inputs) {
  if (inputs.size() != fn.params.size())
    throw LangError(LangError::Kind::ArityMismatch, fn.span,
                    fn.name + " expects " + std::to_string(fn.params.size()) +
                        " inputs, got " + std::to_string(inputs.size()));
  for (std::size_t k = 0; k < inputs.size(); ++k)
    if (inputs[k].type != fn.params[k].type)
      throw LangError(LangError::Kind::ArityMismatch, fn.span,
                      "input " + std::to_string(k) + " of " + fn.name + " must be " +
                          to_string(fn.params[k].type));
}

}  // namespace

ExecResult interpret_function(const Program& prog, const std::string& name,
                              const std::vector<Value>& inputs, std::uint64_t fuel,
                              const InterpOptions& opts) {
  const Function* fn = prog.find(name);
  if (!fn) throw LangError(LangError::Kind::UnresolvedCall, {}, "no function " + name);
  check_inputs(*fn, inputs);
  return Interp(prog, fuel, opts).run(*fn, inputs);
}

ExecResult interpret(const Program& prog, const std::vector<Value>& inputs, std::uint64_t fuel,
                     const InterpOptions& opts) {
  return interpret_function(prog, prog.entry, inputs, fuel, opts);
}

std::optional<Value> eval_pure(const ExprPtr& e, const std::map<std::string, Value>& env) {
  struct Fail {};
  std::function<Value(const Expr&)> ev = [&](const Expr& x) -> Value {
    switch (x.kind) {
      case ExprKind::IntLit: return Value::of_int(x.value);
      case ExprKind::BoolLit: return Value::of_bool(x.value != 0);
      case ExprKind::Var: {
        auto it = env.find(x.name);
        if (it == env.end()) throw Fail{};
        return it->second;
      }
      case ExprKind::Index: {
        auto it = env.find(x.name);
        if (it == env.end()) throw Fail{};
        std::int64_t idx = ev(*x.args[0]).i;
        if (idx < 0 || static_cast<std::uint64_t>(idx) >= it->second.arr.size()) throw Fail{};
        return Value::of_int(it->second.arr[idx]);
      }
      case ExprKind::Unary: {
        Value v = ev(*x.args[0]);
        if (x.unop == UnOp::Not) return Value::of_bool(v.i == 0);
        return Value::of_int(static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(v.i)));
      }
      case ExprKind::Binary: {
        Value l = ev(*x.args[0]);
        if (x.binop == BinOp::And && !l.i) return Value::of_bool(false);
        if (x.binop == BinOp::Or && l.i) return Value::of_bool(true);
        Value r = ev(*x.args[1]);
        bool ok = true;
        std::int64_t v = arith(x.binop, l.i, r.i, ok);
        if (!ok) throw Fail{};
        return x.type == Type::Bool ? Value::of_bool(v != 0) : Value::of_int(v);
      }
      case ExprKind::Call: {
        if (x.name != "len") throw Fail{};
        auto it = env.find(x.args[0]->name);
        if (it == env.end()) throw Fail{};
        return Value::of_int(static_cast<std::int64_t>(it->second.arr.size()));
      }
    }
    throw Fail{};
  };
  try {
    return ev(*e);
  } catch (const Fail&) {
    return std::nullopt;
  }
}

}  // namespace pathfix::lang
