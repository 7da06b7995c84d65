#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathfix/lang/ast.hpp"

namespace pathfix::lang {

struct Value {
  Type type = Type::Void;
  std::int64_t i = 0;  // Int, and Bool as 0/1
  std::vector<std::int64_t> arr;

  static Value of_int(std::int64_t v) { return {Type::Int, v, {}}; }
  static Value of_bool(bool v) { return {Type::Bool, v ? 1 : 0, {}}; }
  static Value of_array(std::vector<std::int64_t> v) { return {Type::IntArray, 0, std::move(v)}; }
  static Value void_value() { return {}; }

  bool operator==(const Value& o) const {
    return type == o.type && i == o.i && arr == o.arr;
  }
  bool operator!=(const Value& o) const { return !(*this == o); }
  std::string str() const;
};

enum class Outcome { Returned, RuntimeError, FuelExhausted };

enum class RuntimeErrorKind { DivByZero, IndexOutOfBounds, MissingReturn, StackOverflow };

const char* to_string(RuntimeErrorKind k);

struct TraceEntry {
  Location loc;
  std::map<std::string, Value> state;  // current frame after the step
  std::optional<bool> branch;          // condition value for If/While
  int depth = 0;                       // call depth of the frame, entry is 0
  std::uint64_t frame = 0;             // activation number, entry is 0
};

struct ExecResult {
  Outcome outcome = Outcome::Returned;
  Value value;
  RuntimeErrorKind error = RuntimeErrorKind::DivByZero;
  Location error_loc;
  std::vector<TraceEntry> trace;
  std::uint64_t steps = 0;

  /// `2`, `true`, `DivByZero@f:3:5`, `FuelExhausted`.
  std::string str() const;
  /// Same outcome class and value/error kind; traces are ignored.
  bool same_outcome(const ExecResult& o) const;
};

struct InterpOptions {
  bool trace = false;
  /// When set, a loop activation may test its condition at most k times; a
  /// k-th test that is true ends the run with FuelExhausted. Mirrors the
  /// symbolic executor's bounds.
  std::optional<int> loop_bound;
  /// When set, a call nested deeper than this ends the run with FuelExhausted.
  std::optional<int> call_bound;
};

inline constexpr int kMaxCallDepth = 2000;

/// Runs the entry function. Fuel counts executed statements, with each loop
/// condition test counted as one step.
ExecResult interpret(const Program& prog, const std::vector<Value>& inputs,
                     std::uint64_t fuel, const InterpOptions& opts = {});

/// Runs a named function of the program.
ExecResult interpret_function(const Program& prog, const std::string& fn,
                              const std::vector<Value>& inputs, std::uint64_t fuel,
                              const InterpOptions& opts = {});

/// Evaluates a side-effect-free expression in a flat environment. Returns
/// nullopt on a runtime error. Calls are not supported.
std::optional<Value> eval_pure(const ExprPtr& e, const std::map<std::string, Value>& env);

/// C semantics on wrapping 64-bit integers; `ok` is cleared on division by 0.
std::int64_t arith(BinOp op, std::int64_t a, std::int64_t b, bool& ok);

}  // namespace pathfix::lang
