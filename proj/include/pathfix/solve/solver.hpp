#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathfix/lang/interpreter.hpp"
#include "pathfix/solve/term.hpp"

namespace pathfix::solve {

struct Decl {
  std::string name;
  Sort sort = Sort::Int;
  int length = 0;  // arrays only
};

/// A boolean term plus its typed free variables. Declaration order is the
/// search order.
struct Formula {
  Term body = bool_const(true);
  std::vector<Decl> decls;

  const Decl* find(const std::string& name) const;
  /// Declares `d` unless a variable of that name is already declared.
  void declare(const Decl& d);
  /// Conjoins `t` to the body.
  void add(const Term& t);
};

using Model = std::map<std::string, lang::Value>;

enum class Status { Sat, Unsat, Unknown };
const char* to_string(Status s);

struct SatResult {
  Status status = Status::Unknown;
  Model model;
  std::uint64_t nodes = 0;
};

struct SolverConfig {
  int int_bound = 16;
  std::uint64_t node_budget = 4'000'000;
  /// Shell command of an external SMT-LIB2 solver reading the problem on
  /// stdin. Used when the built-in search gives up.
  std::string external;
};

/// Bounded model search over [-B, B] for integers and array cells.
SatResult check_sat(const Formula& f, const SolverConfig& cfg = {});

/// Evaluates under a total model. Atoms with an undefined subterm (division
/// by zero, read out of bounds) are false.
bool evaluate(const Term& t, const Model& m);
/// Integer value of `t`, or nullopt when undefined.
std::optional<std::int64_t> evaluate_int(const Term& t, const Model& m);

/// Substitutes the bindings, folds constants, flattens and de-duplicates
/// conjunctions and drops bound declarations.
Formula simplify(const Formula& f, const Model& bindings = {});
Term simplify_term(const Term& t);

/// SMT-LIB2 text over 64-bit bit-vectors, arrays expanded to per-cell
/// constants. With `bound`, every integer is constrained to [-bound, bound].
std::string to_smtlib(const Formula& f, std::optional<int> bound = std::nullopt);

/// Runs an external solver; returns Unknown if it cannot be run or answers
/// anything but sat/unsat.
Status run_external(const std::string& command, const std::string& smtlib);

}  // namespace pathfix::solve
