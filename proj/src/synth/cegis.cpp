#include <set>

#include "json.hpp"
#include "pathfix/lang/patch.hpp"
#include "pathfix/lang/printer.hpp"
#include "pathfix/synth/synth.hpp"

namespace pathfix::synth {

using equiv::TestCase;
using equiv::Theta;
using specinfer::FaultSpec;
using specinfer::HoleKind;

const char* to_string(CegisResult::Status s) {
  switch (s) {
    case CegisResult::Status::Fixed: return "Fixed";
    case CegisResult::Status::NothingToRepair: return "NothingToRepair";
    case CegisResult::Status::ConstraintError: return "ConstraintError";
    case CegisResult::Status::SynthesisError: return "SynthesisError";
  }
  return "?";
}

bool satisfies(const std::vector<FaultSpec>& specs, const lang::ExprPtr& candidate,
               const sym::SymEnv& env) {
  for (const auto& s : specs) {
    bool any = false;
    for (const auto* c : s.retained()) {
      solve::Term h;
      try {
        h = c->hole_term(candidate);
      } catch (const std::exception&) {
        continue;
      }
      if (solve::check_sat(c->formula(env, h, true), env.solver).status == solve::Status::Sat) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

SynthResult synthesize(const std::vector<FaultSpec>& specs, const ComponentPool& pool,
                       std::size_t budget, const sym::SymEnv& env, const lang::Location& fault,
                       PatchKind kind) {
  SynthResult out;
  enumerate(pool, [&](const lang::ExprPtr& e) {
    if (out.tried >= budget) {
      out.budget_exhausted = true;
      return false;
    }
    ++out.tried;
    if (satisfies(specs, e, env)) {
      Patch p;
      p.location = fault;
      p.expr = e;
      p.kind = kind;
      p.round = pool.round;
      p.tried = out.tried;
      out.survivors.push_back(std::move(p));
    }
    return true;
  });
  return out;
}

namespace {

PatchKind kind_of(HoleKind k) {
  switch (k) {
    case HoleKind::Condition: return PatchKind::ReplaceCondition;
    case HoleKind::AssignRhs: return PatchKind::ReplaceAssignRhs;
    case HoleKind::Guard: return PatchKind::InsertGuardReturn;
  }
  return PatchKind::ReplaceCondition;
}

class Loop {
 public:
  Loop(const CegisInput& in, const SynthLimits& limits, CegisResult& out)
      : in_(in), limits_(limits), out_(out) {}

  void run();

 private:
  const CegisInput& in_;
  const SynthLimits& limits_;
  CegisResult& out_;
  std::vector<FaultSpec> filter_;
  std::vector<equiv::PathTriplet> faults_;
  std::vector<TestCase> tests_;
  std::set<std::string> seen_;
  PatchKind kind_ = PatchKind::ReplaceCondition;
  lang::ExprPtr guard_value_;

  void log(int round, std::size_t index, const std::string& expr, bool ok,
           const std::string& reason) {
    nlohmann::json j = {{"round", round},
                        {"index", index},
                        {"expr", expr},
                        {"verdict", ok ? "accepted" : "rejected"},
                        {"reason", reason}};
    out_.log.push_back(j.dump());
  }

  void learn(const TestCase& t) {
    for (const auto& o : tests_)
      if (o.inputs == t.inputs) return;
    tests_.push_back(t);
    out_.counterexamples.push_back(t);
  }

  bool attempt(const lang::ExprPtr& e, int round, std::size_t index, bool oracle);
};

bool Loop::attempt(const lang::ExprPtr& e, int round, std::size_t index, bool oracle) {
  Patch p;
  p.location = in_.fault;
  p.expr = e;
  p.kind = kind_;
  p.guard_value = guard_value_;
  p.oracle = oracle;
  p.round = round;
  std::string text = lang::to_source(e);
  ++out_.tried;
  p.tried = out_.tried;

  lang::Program patched;
  try {
    patched = p.apply(*in_.program);
  } catch (const std::exception& ex) {
    log(round, index, text, false, std::string("ill-typed: ") + ex.what());
    return false;
  }
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    Theta got = Theta::of(equiv::run_bounded(patched, tests_[i].inputs, in_.verify.equiv.sym));
    if (got != tests_[i].expected) {
      log(round, index, text, false, "test " + std::to_string(i) + " failed");
      return false;
    }
  }
  if (!satisfies(filter_, e, in_.env)) {
    log(round, index, text, false, "violates expected-path constraints");
    return false;
  }
  auto rep = verify::verify_patch(patched, in_.reference, faults_, in_.bank, in_.pre, in_.verify,
                                  p.str());
  if (!rep.accepted) {
    for (const auto& f : rep.fault_results)
      if (!f.fixed) learn(f.counterexample);
    for (const auto& b : rep.benign_results)
      if (!b.preserved) learn(b.test);
    if (rep.equivalence && rep.equivalence->counterexample) learn(*rep.equivalence->counterexample);
    log(round, index, text, false, rep.reason);
    return false;
  }
  log(round, index, text, true, "");
  out_.patch = p;
  out_.report = rep;
  out_.rounds = round;
  out_.status = CegisResult::Status::Fixed;
  return true;
}

void Loop::run() {
  if (in_.specs.empty()) {
    out_.status = CegisResult::Status::NothingToRepair;
    out_.reason = "no fault paths";
    return;
  }
  bool any_real = false;
  for (const auto& s : in_.specs) {
    if (s.retained().empty()) {
      out_.status = CegisResult::Status::ConstraintError;
      out_.reason = "fault path " + s.triplet.id + " has no feasible expected path";
      return;
    }
    faults_.push_back(s.triplet);
    if (!s.synthetic) any_real = true;
  }
  // With mixed hole kinds the guard specs only inform verification.
  for (const auto& s : in_.specs)
    if (!any_real || !s.synthetic) filter_.push_back(s);
  kind_ = kind_of(filter_.front().retained().front()->hole.kind);

  lang::ExprPtr fault_expr;
  try {
    fault_expr = lang::hole_expr(*in_.program, in_.fault);
  } catch (const std::exception&) {
  }
  lang::Type hole_type = lang::Type::Bool;
  if (kind_ == PatchKind::ReplaceAssignRhs) hole_type = lang::hole_type(*in_.program, in_.fault);
  if (kind_ == PatchKind::InsertGuardReturn) {
    const auto& ref = filter_.front().triplet.theta_ref;
    if (ref.kind == Theta::Kind::Value && ref.value.type != lang::Type::Void)
      guard_value_ = ref.value.type == lang::Type::Bool ? lang::Expr::bool_lit(ref.value.i != 0)
                                                         : lang::Expr::int_lit(ref.value.i);
  }

  std::vector<const specinfer::ExpectedPathConstraint*> cs;
  for (const auto& s : filter_)
    for (const auto* c : s.retained()) cs.push_back(c);
  ComponentPool pool = prioritize_components(*in_.program, in_.fault, fault_expr, cs, hole_type);
  pool.max_depth = limits_.max_depth;
  out_.pool = pool;

  std::size_t index = 0;
  for (const auto& e : in_.suggestions) {
    if (!e || !seen_.insert(lang::to_source(e)).second) continue;
    if (attempt(e, 0, index++, true)) return;
  }

  for (int r = 1; r <= limits_.rounds; ++r) {
    ComponentPool rp = pool.for_round(r);
    std::size_t count = 0;
    bool done = false;
    enumerate(rp, [&](const lang::ExprPtr& e) {
      if (count >= limits_.budget) return false;
      if (!seen_.insert(lang::to_source(e)).second) return true;
      ++count;
      done = attempt(e, r, count - 1, false);
      return !done;
    });
    out_.rounds = r;
    if (done) return;
  }
  out_.status = CegisResult::Status::SynthesisError;
  out_.reason = "no candidate survived " + std::to_string(limits_.rounds) + " rounds";
}

}  // namespace

CegisResult cegis_loop(const CegisInput& in, const SynthLimits& limits) {
  CegisResult out;
  Loop(in, limits, out).run();
  return out;
}

}  // namespace pathfix::synth
