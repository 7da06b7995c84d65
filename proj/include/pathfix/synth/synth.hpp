#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathfix/equiv/equiv.hpp"
#include "pathfix/lang/ast.hpp"
#include "pathfix/specinfer/specinfer.hpp"
#include "pathfix/verify/verify.hpp"

namespace pathfix::synth {

enum class OpCategory { Relational, Logical, Arithmetic, Bitwise };
const char* to_string(OpCategory c);

struct ComponentPool {
  std::vector<std::string> variables;  // priority order; arrays only index
  std::vector<std::size_t> tiers;      // end offset of each non-empty tier
  std::vector<OpCategory> operators;   // priority order
  std::vector<std::int64_t> constants;
  std::map<std::string, lang::Type> types;
  lang::Type hole_type = lang::Type::Bool;
  int max_depth = 3;
  int round = 1;

  /// The pool of round `r`: a prefix of the tiers and operator categories.
  ComponentPool for_round(int r) const;
};

enum class PatchKind { ReplaceCondition, ReplaceAssignRhs, InsertGuardReturn };
const char* to_string(PatchKind k);

struct Patch {
  lang::Location location;
  lang::ExprPtr expr;
  PatchKind kind = PatchKind::ReplaceCondition;
  lang::ExprPtr guard_value;  // InsertGuardReturn; null for void
  bool oracle = false;        // provenance: oracle suggestion
  int round = 0;
  std::size_t tried = 0;

  lang::Program apply(const lang::Program& prog) const;
  /// `bin_search:5:10: while (L <= R)` style summary.
  std::string str() const;
};

/// Variables of the fault expression first, then variables assigned on the
/// expected paths (nearest the hole first), then the rest in scope.
ComponentPool prioritize_components(const lang::Program& prog, const lang::Location& fault,
                                    const lang::ExprPtr& fault_expr,
                                    const std::vector<const specinfer::ExpectedPathConstraint*>& cs,
                                    lang::Type hole_type);

/// Typed bottom-up enumeration in canonical form; `visit` returns false to
/// stop. Depth-0 leaves first.
void enumerate(const ComponentPool& pool, const std::function<bool(const lang::ExprPtr&)>& visit);

/// Existence check: for each fault triplet some retained constraint is
/// satisfiable with the hole bound to `candidate`.
bool satisfies(const std::vector<specinfer::FaultSpec>& specs, const lang::ExprPtr& candidate,
               const sym::SymEnv& env);

struct SynthResult {
  std::vector<Patch> survivors;
  std::size_t tried = 0;
  bool budget_exhausted = false;
};

SynthResult synthesize(const std::vector<specinfer::FaultSpec>& specs, const ComponentPool& pool,
                       std::size_t budget, const sym::SymEnv& env,
                       const lang::Location& fault, PatchKind kind);

struct SynthLimits {
  int rounds = 4;
  std::size_t budget = 5000;
  int max_depth = 3;
};

struct CegisInput {
  const lang::Program* program = nullptr;
  const lang::Program* reference = nullptr;  // null in tests-only mode
  lang::ExprPtr pre;
  lang::Location fault;
  std::vector<specinfer::FaultSpec> specs;
  std::vector<equiv::TestCase> bank;
  sym::SymEnv env;
  verify::VerifyOptions verify;
  std::vector<lang::ExprPtr> suggestions;  // oracle patches, tried first
};

struct CegisResult {
  enum class Status { Fixed, NothingToRepair, ConstraintError, SynthesisError };
  Status status = Status::SynthesisError;
  std::optional<Patch> patch;
  std::optional<verify::VerificationReport> report;
  std::string reason;
  int rounds = 0;
  std::size_t tried = 0;
  std::vector<equiv::TestCase> counterexamples;
  std::vector<std::string> log;  // JSON lines
  ComponentPool pool;
};

const char* to_string(CegisResult::Status s);

CegisResult cegis_loop(const CegisInput& in, const SynthLimits& limits);

}  // namespace pathfix::synth
