#include "pathfix/verify/verify.hpp"

namespace pathfix::verify {

using equiv::Theta;

std::vector<FaultResult> verify_fault_paths(const lang::Program& patched,
                                            const lang::Program* reference,
                                            const std::vector<equiv::PathTriplet>& triplets,
                                            const lang::ExprPtr& pre, const VerifyOptions& opts) {
  std::vector<FaultResult> out;
  for (const auto& t : triplets) {
    FaultResult r;
    r.triplet = t.id;
    r.got = Theta::of(equiv::run_bounded(patched, t.witness_inputs, opts.equiv.sym));
    if (r.got != t.theta_ref) {
      r.counterexample = {t.witness_inputs, t.theta_ref};
      out.push_back(std::move(r));
      continue;
    }
    r.fixed = true;
    if (reference) {
      equiv::EquivOptions o = opts.equiv;
      o.region = t.input_condition;
      equiv::EquivResult er = equiv::check_equivalence(patched, *reference, pre, o);
      for (const auto& f : er.triplets) {
        if (!f.fault) continue;
        r.fixed = false;
        r.counterexample = {f.witness_inputs, f.theta_ref};
        r.got = f.theta_tgt;
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BenignResult> verify_benign_paths(const lang::Program& patched,
                                              const std::vector<equiv::TestCase>& bank,
                                              const VerifyOptions& opts) {
  std::vector<BenignResult> out;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    BenignResult r;
    r.index = i;
    r.test = bank[i];
    r.got = Theta::of(equiv::run_bounded(patched, bank[i].inputs, opts.equiv.sym));
    r.preserved = r.got == bank[i].expected;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<equiv::TestCase> benign_bank(const equiv::EquivResult& eq,
                                         const std::vector<equiv::TestCase>& user_tests) {
  std::vector<equiv::TestCase> out;
  auto add = [&](const equiv::TestCase& tc) {
    if (tc.expected.kind == Theta::Kind::Bound) return;
    for (const auto& o : out)
      if (o.inputs == tc.inputs) return;
    out.push_back(tc);
  };
  for (const auto& t : eq.triplets)
    if (!t.fault) add({t.witness_inputs, t.theta_ref});
  for (const auto& tc : user_tests) add(tc);
  return out;
}

VerificationReport verify_patch(const lang::Program& patched, const lang::Program* reference,
                                const std::vector<equiv::PathTriplet>& faults,
                                const std::vector<equiv::TestCase>& bank, const lang::ExprPtr& pre,
                                const VerifyOptions& opts, const std::string& patch_text) {
  VerificationReport rep;
  rep.patch = patch_text;
  rep.fault_results = verify_fault_paths(patched, reference, faults, pre, opts);
  for (const auto& f : rep.fault_results)
    if (!f.fixed) {
      rep.reason = "fault path " + f.triplet + " still faulty";
      return rep;
    }
  if (bank.empty()) rep.warnings.push_back("benign test bank is empty");
  rep.benign_results = verify_benign_paths(patched, bank, opts);
  for (const auto& b : rep.benign_results)
    if (!b.preserved) {
      rep.reason = "benign test " + std::to_string(b.index) + " broken";
      return rep;
    }
  if (reference && opts.full_recheck) {
    equiv::EquivResult er = equiv::check_equivalence(patched, *reference, pre, opts.equiv);
    EquivalenceSummary s;
    s.triplets = er.triplets.size();
    s.faults = er.fault_count();
    s.truncated = er.truncated;
    s.warnings = er.warnings;
    for (const auto& t : er.triplets)
      if (t.fault) {
        s.counterexample = equiv::TestCase{t.witness_inputs, t.theta_ref};
        break;
      }
    rep.equivalence = s;
    if (s.faults > 0) {
      rep.reason = "equivalence recheck found " + std::to_string(s.faults) + " fault path(s)";
      return rep;
    }
  }
  rep.accepted = true;
  return rep;
}

}  // namespace pathfix::verify
