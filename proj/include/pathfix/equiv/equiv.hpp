#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathfix/lang/interpreter.hpp"
#include "pathfix/sym/sym.hpp"

namespace pathfix::equiv {

class EquivError : public std::runtime_error {
 public:
  enum class Kind { SignatureMismatch, BadTests };
  EquivError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A concrete observable outcome: a value, a runtime error kind, or bound
/// exhaustion.
struct Theta {
  enum class Kind { Value, Error, Bound };
  Kind kind = Kind::Value;
  lang::Value value;
  lang::RuntimeErrorKind error = lang::RuntimeErrorKind::DivByZero;

  static Theta of(const lang::ExecResult& r);
  /// `2`, `true`, `IndexOutOfBounds`, `BoundExhausted`.
  std::string str() const;
  bool operator==(const Theta& o) const;
  bool operator!=(const Theta& o) const { return !(*this == o); }
};

struct PathTriplet {
  std::string id;                  // P1, P2, ...
  solve::Term input_condition;     // pi_tgt && pi_ref
  Theta theta_ref;
  Theta theta_tgt;
  bool fault = false;
  std::string warning;
  solve::Model witness;
  std::vector<lang::Value> witness_inputs;
  int target_path = -1;
  int reference_path = -1;         // -1 when derived from a test
  std::vector<lang::Location> target_trace;
  std::optional<lang::Location> target_exit;  // set when the target returned
};

struct TestCase {
  std::vector<lang::Value> inputs;
  Theta expected;
};

struct EquivOptions {
  sym::SymOptions sym;
  /// Extra restriction on the inputs, over the input symbols.
  solve::Term region;
};

struct EquivResult {
  sym::SymEnv env;
  std::vector<PathTriplet> triplets;
  std::vector<std::string> warnings;
  bool truncated = false;

  std::size_t fault_count() const;
};

/// Interprets with the same bounds the symbolic executor uses.
lang::ExecResult run_bounded(const lang::Program& prog, const std::vector<lang::Value>& inputs,
                             const sym::SymOptions& opts);

EquivResult check_equivalence(const lang::Program& target, const lang::Program& reference,
                              const lang::ExprPtr& pre, const EquivOptions& opts = {});

/// Fault triplets of the failing tests, one per distinct target path.
EquivResult faults_from_tests(const lang::Program& target, const std::vector<TestCase>& tests,
                              const lang::ExprPtr& pre, const EquivOptions& opts = {});

/// Tests JSON: `[{"inputs": [...], "expected": 2}]`. `expected` may be an
/// int, a bool or a runtime error name.
std::vector<TestCase> parse_tests(const std::string& json, const lang::Function& fn);
std::string tests_to_json(const std::vector<TestCase>& tests);

}  // namespace pathfix::equiv
