#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathfix/lang/ast.hpp"
#include "pathfix/lang/interpreter.hpp"
#include "pathfix/solve/solver.hpp"

namespace pathfix::sym {

class SymError : public std::runtime_error {
 public:
  enum class Kind { UnboundedArray, InfeasiblePre, BadPre };
  SymError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A variable's symbolic value: a scalar term or one term per array cell.
struct SymVal {
  solve::Term scalar;
  std::vector<solve::Term> cells;
  bool is_array = false;
};

struct SymState {
  std::map<std::string, SymVal> store;  // current frame
  std::vector<solve::Term> path_condition;
  std::map<std::string, int> version_counter;
  std::uint64_t steps = 0;
};

enum class Outcome { Returned, RuntimeError, BoundExhausted };
const char* to_string(Outcome o);

struct SymPath {
  solve::Term input_condition;
  Outcome outcome = Outcome::Returned;
  solve::Term value;  // Returned; null for void
  lang::RuntimeErrorKind error = lang::RuntimeErrorKind::DivByZero;
  lang::Location error_loc;  // RuntimeError, and the bound site for BoundExhausted
  /// Return statement that ended the entry call; empty path for falling off
  /// a void function.
  lang::Location exit_loc;
  SymState state;
  std::vector<lang::Location> trace;
  /// `2`, `x`, `IndexOutOfBounds`, `BoundExhausted`.
  std::string outcome_str() const;
};

struct SymOptions {
  /// Condition tests per loop activation; a true last test is BoundExhausted.
  int loop_trips = 16;
  int call_depth = 4;
  std::uint64_t step_fuel = 100000;
  std::size_t max_paths = 4096;
  solve::SolverConfig solver;
  /// Names of the input symbols, by parameter position. Defaults to the
  /// entry function's parameter names.
  std::vector<std::string> input_names;
  /// Follow a single concrete input instead of forking.
  std::optional<solve::Model> guide;
};

/// Symbolic inputs shared by every path of one execution.
struct SymEnv {
  std::vector<solve::Decl> inputs;
  std::map<std::string, std::int64_t> fixed;  // scalars pinned by `v == c` in pre
  solve::Term pre = solve::bool_const(true);
  solve::SolverConfig solver;

  solve::Formula formula(const std::vector<solve::Term>& pc, const solve::Term& extra) const;
};

struct SymResult {
  SymEnv env;
  std::vector<SymPath> paths;
  bool truncated = false;
};

/// Parses a pre-condition over the entry function's parameters.
lang::ExprPtr parse_pre(const lang::Program& prog, const std::string& text);

/// Builds the symbolic inputs of `fn` under `pre`: array lengths from
/// `len(a) == N`, pinned scalars and the pre term. Throws UnboundedArray or
/// InfeasiblePre.
SymEnv make_env(const lang::Function& fn, const lang::ExprPtr& pre, const SymOptions& opts);

/// Translates an expression over the parameters of `fn` into a term over the
/// input symbols; `len` folds to the declared length.
solve::Term input_term(const lang::Function& fn, const SymEnv& env, const lang::ExprPtr& e,
                       const std::vector<std::string>& names);

/// Executes the entry function (or `function` when non-empty).
SymResult sym_execute(const lang::Program& prog, const lang::ExprPtr& pre,
                      const SymOptions& opts = {}, const std::string& function = "");

/// Executes under an existing environment (used to run two programs over the
/// same inputs).
SymResult sym_execute_in(const lang::Program& prog, const SymEnv& env, const SymOptions& opts,
                         const std::string& function = "");

solve::Status feasible(const SymEnv& env, const SymState& state, const solve::Term& extra);

/// Concrete entry arguments from a model over the input symbols.
std::vector<lang::Value> inputs_from_model(const SymEnv& env, const solve::Model& m);
/// Model over the input symbols from concrete entry arguments.
solve::Model model_from_inputs(const SymEnv& env, const std::vector<lang::Value>& args);

}  // namespace pathfix::sym
