#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathfix/equiv/equiv.hpp"
#include "pathfix/lang/ast.hpp"

namespace pathfix::verify {

struct FaultResult {
  std::string triplet;
  bool fixed = false;
  /// Counterexample when still faulty: inputs and the reference outcome.
  equiv::TestCase counterexample;
  equiv::Theta got;
};

struct BenignResult {
  std::size_t index = 0;
  bool preserved = true;
  equiv::TestCase test;
  equiv::Theta got;
};

struct EquivalenceSummary {
  std::size_t triplets = 0;
  std::size_t faults = 0;
  bool truncated = false;
  std::vector<std::string> warnings;
  std::optional<equiv::TestCase> counterexample;
};

struct VerificationReport {
  std::string patch;
  std::vector<FaultResult> fault_results;
  std::vector<BenignResult> benign_results;
  std::optional<EquivalenceSummary> equivalence;
  bool accepted = false;
  std::string reason;  // empty when accepted
  std::vector<std::string> warnings;
};

struct VerifyOptions {
  equiv::EquivOptions equiv;
  /// Re-run the whole equivalence check after the per-path checks.
  bool full_recheck = true;
};

/// Each fault triplet's region is re-checked symbolically against the
/// reference; without a reference the triplet's witness is replayed.
std::vector<FaultResult> verify_fault_paths(const lang::Program& patched,
                                            const lang::Program* reference,
                                            const std::vector<equiv::PathTriplet>& triplets,
                                            const lang::ExprPtr& pre, const VerifyOptions& opts);

std::vector<BenignResult> verify_benign_paths(const lang::Program& patched,
                                              const std::vector<equiv::TestCase>& bank,
                                              const VerifyOptions& opts);

/// One concrete test per benign triplet plus the user's passing tests.
std::vector<equiv::TestCase> benign_bank(const equiv::EquivResult& eq,
                                         const std::vector<equiv::TestCase>& user_tests);

/// Fault paths, then benign replay, then (with a reference and
/// `full_recheck`) a whole-program equivalence check.
VerificationReport verify_patch(const lang::Program& patched, const lang::Program* reference,
                                const std::vector<equiv::PathTriplet>& faults,
                                const std::vector<equiv::TestCase>& bank, const lang::ExprPtr& pre,
                                const VerifyOptions& opts, const std::string& patch_text = "");

}  // namespace pathfix::verify
