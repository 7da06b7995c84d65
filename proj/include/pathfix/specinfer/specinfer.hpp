#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathfix/cfg/cfg.hpp"
#include "pathfix/equiv/equiv.hpp"
#include "pathfix/lang/ast.hpp"
#include "pathfix/solve/solver.hpp"
#include "pathfix/sym/sym.hpp"

namespace pathfix::specinfer {

class SpecError : public std::runtime_error {
 public:
  enum class Kind { NoCandidates, UnsupportedStatement };
  SpecError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Node id used for the synthetic `return` of a pattern-3 guard.
inline constexpr int kSyntheticExit = -2;

enum class RecursionMode { None, FirstSelfInvocation };

struct SliceStep {
  int node = 0;
  std::optional<bool> polarity;  // outgoing branch direction of a condition
  bool context = false;          // part of the pre-context
  bool fault = false;
  /// Variables given fresh unconstrained versions before this step (a loop
  /// entered after the fault and re-tested through its back edge).
  std::vector<std::string> havoc;
};

struct SlicedPath {
  cfg::CandidatePath origin;
  std::vector<SliceStep> steps;  // pre-context, fault, ..., exit
  RecursionMode recursion = RecursionMode::None;

  std::vector<int> retained_nodes() const;
  std::size_t fault_index() const;
};

struct VersionedVar {
  std::string base;
  int version = 0;
  std::string name() const;  // `m_1`
};

enum class HoleKind { Condition, AssignRhs, Guard };

struct Hole {
  HoleKind kind = HoleKind::Condition;
  lang::Location loc;
  lang::Type type = lang::Type::Bool;
  bool negated = false;
  /// The placeholder variable substituted by a candidate's term.
  std::string beta = "beta";
  /// SSA name of each in-scope variable at the hole.
  std::map<std::string, std::string> versions;
};

struct Transition {
  solve::Term term;
  int node = 0;
  int step = 0;         // index into the sliced path
  std::string defines;  // SSA name introduced, if any
  bool context = false;
  bool hole = false;
};

/// Where an SSA name gets its value: the slice entry, an input symbol, the
/// state after a step, the state before a havoc step, or nowhere (call
/// results and ghost reads stay free).
struct SsaDef {
  enum class Kind { Entry, Input, After, Havoc, Free };
  Kind kind = Kind::Entry;
  std::string name;
  std::string base;
  int step = -1;
  lang::Type type = lang::Type::Int;
};

struct ExpectedPathConstraint {
  std::string triplet_id;
  int candidate = 0;  // index among the triplet's candidates, 1-based
  std::string id;     // `EP1`, numbered across all fault triplets
  SlicedPath path;
  solve::Term pre;                       // P: the triplet's input condition
  std::vector<Transition> transitions;   // C_i, hole included
  solve::Term post;                      // Q
  solve::Term side;                      // bounds and non-zero divisors
  Hole hole;
  solve::Model instantiation;
  std::vector<solve::Decl> decls;        // SSA, ghost and call variables
  std::vector<SsaDef> defs;
  std::map<std::string, solve::Term> arrays;  // array name -> term at the hole
  std::map<std::string, int> lengths;
  bool pruned = false;
  std::string reason;                    // set when pruned
  bool oracle_pruned = false;
  /// P carries unverified oracle invariants.
  bool hinted = false;

  /// Term for a candidate hole expression over the variables in scope.
  solve::Term hole_term(const lang::ExprPtr& candidate) const;
  /// P && C[beta := h] && Q && side, over the SSA and input symbols.
  solve::Term body(const solve::Term& h) const;
  /// Formula with the input declarations of `env` and the pre-condition.
  solve::Formula formula(const sym::SymEnv& env, const solve::Term& h,
                         bool instantiate = true) const;
  /// `P && C_1 && ... && beta && ... => Q` in SSA form.
  std::string text() const;
  /// Same, after folding the instantiated inputs.
  std::string folded_text() const;
  /// Pre/post-state table, one row per retained statement.
  std::string table(const cfg::Cfg& cfg) const;
  std::string smtlib(const sym::SymEnv& env) const;
};

struct SpecOptions {
  cfg::PathLimits limits;
  /// Allow pattern-3 guard candidates.
  bool synthetic = false;
  /// Oracle-proposed loop invariants over the names in scope at the hole.
  std::vector<std::string> invariants;
};

/// Candidate expected paths for a fault triplet.
std::vector<cfg::CandidatePath> derive_expected_paths(const lang::Program& prog,
                                                      const cfg::Cfg& cfg,
                                                      const cfg::LineGraph& lg,
                                                      const lang::Location& fault,
                                                      const equiv::PathTriplet& triplet,
                                                      const SpecOptions& opts = {});

SlicedPath slice_path(const cfg::CandidatePath& candidate, const cfg::Cfg& cfg,
                      const lang::Program& prog);

struct OracleHint {
  std::vector<std::string> invariants;  // extra conjuncts on P, over SSA names
};

ExpectedPathConstraint summarize_constraint(const SlicedPath& sliced,
                                            const equiv::PathTriplet& triplet,
                                            const lang::Program& prog, const cfg::Cfg& cfg,
                                            const sym::SymEnv& env,
                                            const std::optional<OracleHint>& hint = {});

struct PruneLog {
  std::string id;
  bool pruned = false;
  std::string reason;
};

/// Marks infeasible constraints as pruned. `oracle_prune` names constraint
/// ids the oracle advises dropping; they are honoured only when the triplet
/// keeps at least one constraint.
std::vector<PruneLog> prune_paths(std::vector<ExpectedPathConstraint>& constraints,
                                  const sym::SymEnv& env,
                                  const std::set<std::string>& oracle_prune = {});

/// All retained constraints of one fault triplet.
struct FaultSpec {
  equiv::PathTriplet triplet;
  std::vector<ExpectedPathConstraint> constraints;
  std::vector<PruneLog> log;
  bool synthetic = false;

  std::vector<const ExpectedPathConstraint*> retained() const;
};

/// Derive, slice, summarize and prune for one triplet; falls back to a
/// pattern-3 guard when a crash or bound fault keeps no constraint.
FaultSpec infer(const lang::Program& prog, const lang::Location& fault,
                const equiv::PathTriplet& triplet, const sym::SymEnv& env,
                const SpecOptions& opts = {}, const std::set<std::string>& oracle_prune = {},
                int first_ep = 1);

/// How a concrete trace lines up with a sliced path. The trace is read in the
/// shallowest activation of the path's function, latest activation first.
struct TraceMatch {
  enum class Fit { Followed, Diverged, Missed };
  Fit fit = Fit::Missed;
  /// SSA names bound along the matched prefix.
  solve::Model valuation;
  /// First step the trace left the path (Diverged only).
  int diverged_step = -1;
};

/// Longest match that reaches the hole; Missed when no match does.
TraceMatch match_trace(const ExpectedPathConstraint& c, const cfg::Cfg& cfg,
                       const lang::ExecResult& run, const solve::Model& inputs);

/// SSA valuation of a constraint read off a concrete trace of the patched
/// program, or nullopt when the trace does not follow the sliced path.
std::optional<solve::Model> valuation_from_trace(const ExpectedPathConstraint& c,
                                                 const cfg::Cfg& cfg,
                                                 const lang::ExecResult& run,
                                                 const solve::Model& inputs);

enum class TraceVerdict {
  Holds,       // trace follows the path and the constraint is true
  Vacuous,     // trace leaves the path where the constraint's branch is false
  Violated,    // a followed path with a false constraint, or an unfaithful branch
  NotReached,  // the trace never reaches the hole along this path
};
const char* to_string(TraceVerdict v);

/// Evaluates one constraint, hole valued by `patch`, under the trace's SSA
/// valuation.
TraceVerdict evaluate_on_trace(const ExpectedPathConstraint& c, const cfg::Cfg& cfg,
                               const lang::ExecResult& run, const solve::Model& inputs,
                               const lang::ExprPtr& patch, const sym::SymEnv& env);

/// Whether some sliced path of `spec` matches the trace and its constraint
/// holds with the hole valued by `patch`.
bool trace_consistent(const FaultSpec& spec, const cfg::Cfg& cfg, const lang::ExecResult& run,
                      const solve::Model& inputs, const lang::ExprPtr& patch,
                      const sym::SymEnv& env);

/// Every SSA variable used is defined by P or an earlier transition.
bool ssa_well_formed(const ExpectedPathConstraint& c);

}  // namespace pathfix::specinfer
