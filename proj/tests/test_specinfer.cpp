#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "pathfix/lang/interpreter.hpp"
#include "pathfix/lang/parser.hpp"
#include "pathfix/lang/patch.hpp"
#include "pathfix/specinfer/specinfer.hpp"
#include "support.hpp"

using namespace pathfix;
using namespace pathfix::specinfer;
using lang::Value;

namespace {

const char* kPre = "len(a) == 3 && length == 3 && a[0] < a[1] && a[1] < a[2]";

struct Canonical {
  lang::Program target = pathfix::testing::load_program("fixtures/programs/bin_search_buggy.mc");
  lang::Program reference = pathfix::testing::load_program("fixtures/programs/lin_search_ref.mc");
  equiv::EquivResult eq =
      equiv::check_equivalence(target, reference, sym::parse_pre(target, kPre));
  lang::Location fault{"bin_search", {3}, {}};
  cfg::Cfg g = cfg::build_cfg(target.entry_function());

  std::vector<FaultSpec> specs() {
    std::vector<FaultSpec> out;
    int ep = 1;
    for (const auto& t : eq.triplets)
      if (t.fault) {
        out.push_back(infer(target, fault, t, eq.env, {}, {}, ep));
        ep += static_cast<int>(out.back().constraints.size());
      }
    return out;
  }
};

std::vector<std::string> transitions(const ExpectedPathConstraint& c) {
  std::vector<std::string> out;
  for (const auto& t : c.transitions) out.push_back(solve::to_string(t.term));
  return out;
}

struct Small {
  lang::Program prog;
  sym::SymEnv env;
  cfg::Cfg g;
  cfg::LineGraph lg;

  explicit Small(const std::string& src, const std::string& pre = "true")
      : prog(lang::parse_program(src)),
        env(sym::make_env(prog.entry_function(), sym::parse_pre(prog, pre), {})),
        g(cfg::build_cfg(prog.entry_function())),
        lg(cfg::line_graph(g)) {}

  equiv::PathTriplet triplet(std::int64_t want, std::int64_t got, solve::Model witness,
                             std::vector<int> exit) const {
    equiv::PathTriplet t;
    t.id = "P1";
    t.fault = true;
    t.input_condition = solve::bool_const(true);
    t.theta_ref.value = Value::of_int(want);
    t.theta_tgt.value = Value::of_int(got);
    t.witness = std::move(witness);
    t.target_exit = lang::Location{prog.entry, std::move(exit), {}};
    return t;
  }

  std::vector<ExpectedPathConstraint> summarize(const lang::Location& fault,
                                                const equiv::PathTriplet& t) const {
    std::vector<ExpectedPathConstraint> out;
    for (const auto& c : derive_expected_paths(prog, g, lg, fault, t))
      out.push_back(summarize_constraint(slice_path(c, g, prog), t, prog, g, env));
    return out;
  }
};

}  // namespace

TEST(DeriveExpectedPaths, CanonicalYieldsFourCandidates) {
  Canonical c;
  cfg::LineGraph lg = cfg::line_graph(c.g);
  std::vector<std::string> exits;
  for (const auto& t : c.eq.triplets) {
    if (!t.fault) continue;
    for (const auto& p : derive_expected_paths(c.target, c.g, lg, c.fault, t)) {
      EXPECT_EQ(p.pattern, 2);
      exits.push_back(t.id + " " + c.g.nodes[p.exit].label());
    }
  }
  EXPECT_EQ(exits, (std::vector<std::string>{"P2 return m", "P2 return m", "P6 return -1",
                                             "P6 return -1"}));
}

TEST(DeriveExpectedPaths, StraightLineHasOnePatternOneCandidate) {
  Small s("int f(int x) { int y = x + 1; return y; }");
  auto t = s.triplet(5, 7, {{"x", Value::of_int(4)}}, {1});
  auto paths = derive_expected_paths(s.prog, s.g, s.lg, {"f", {0}, {}}, t);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].pattern, 1);
}

TEST(DeriveExpectedPaths, CrashWithoutExitGivesGuard) {
  Small s("int f(int a, int b) { return a / b; }");
  equiv::PathTriplet t = s.triplet(0, 0, {{"a", Value::of_int(0)}, {"b", Value::of_int(0)}}, {0});
  t.theta_tgt.kind = equiv::Theta::Kind::Error;
  t.target_exit.reset();
  SpecOptions o;
  o.synthetic = true;
  auto paths = derive_expected_paths(s.prog, s.g, s.lg, {"f", {0}, {}}, t, o);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].pattern, 3);
  EXPECT_EQ(paths[0].exit, kSyntheticExit);
}

TEST(DeriveExpectedPaths, UnknownFaultLocation) {
  Small s("int f(int x) { return x; }");
  auto t = s.triplet(1, 2, {}, {0});
  try {
    derive_expected_paths(s.prog, s.g, s.lg, {"f", {7}, {}}, t);
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.kind(), SpecError::Kind::NoCandidates);
  }
}

TEST(SlicePath, CanonicalEp1StartsAtTheBackEdgeContext) {
  Canonical c;
  auto specs = c.specs();
  const auto& ep1 = specs[0].constraints[0];
  std::vector<std::string> labels;
  for (int n : ep1.path.retained_nodes()) labels.push_back(c.g.nodes[n].label());
  EXPECT_EQ(labels, (std::vector<std::string>{"if (a[m] == x)", "if (x > a[m])", "L = m + 1",
                                              "while (L <= m)", "m = (L + R) / 2",
                                              "if (a[m] == x)", "return m"}));
  EXPECT_EQ(ep1.path.fault_index(), 3u);
}

TEST(SlicePath, LoopFreeCandidateIsUnchanged) {
  Small s("int f(int x) { int y = x + 1; if (y > 9) { return 0; } return y; }");
  auto t = s.triplet(5, 0, {{"x", Value::of_int(4)}}, {1, 0, 0});
  auto paths = derive_expected_paths(s.prog, s.g, s.lg, {"f", {1}, {}}, t);
  ASSERT_EQ(paths.size(), 1u);
  SlicedPath sp = slice_path(paths[0], s.g, s.prog);
  std::vector<int> expect;
  for (const auto& ctx : paths[0].pre_context) expect.push_back(ctx.node);
  expect.insert(expect.end(), paths[0].nodes.begin(), paths[0].nodes.end());
  EXPECT_EQ(sp.retained_nodes(), expect);
  EXPECT_EQ(sp.recursion, RecursionMode::None);
}

TEST(SlicePath, NestedLoopKeepsTheFinalInnerRound) {
  Small s(
      "int f(int n) { int s = 0; int i = 0; while (i < n) { int j = 0; "
      "while (j < i) { s = s + j; j = j + 1; } i = i + 1; } return s; }");
  auto t = s.triplet(3, 4, {{"n", Value::of_int(3)}}, {3});
  auto paths = derive_expected_paths(s.prog, s.g, s.lg, {"f", {2, 0, 1, 0, 0}, {}}, t);
  ASSERT_EQ(paths.size(), 1u);
  SlicedPath sp = slice_path(paths[0], s.g, s.prog);
  std::vector<std::string> labels;
  for (int n : sp.retained_nodes()) labels.push_back(s.g.nodes[n].label());
  EXPECT_EQ(labels, (std::vector<std::string>{"while (j < i)", "s = s + j", "j = j + 1",
                                              "while (j < i)", "i = i + 1", "while (i < n)",
                                              "return s"}));
  for (const auto& st : sp.steps) EXPECT_TRUE(st.havoc.empty());
  std::size_t faults = 0;
  for (const auto& st : sp.steps) faults += st.fault;
  EXPECT_EQ(faults, 1u);
}

TEST(SlicePath, RecursiveFunctionIsFlagged) {
  Small s("int f(int n) { if (n <= 0) { return 0; } return n + f(n - 1); }");
  auto t = s.triplet(1, 2, {{"n", Value::of_int(1)}}, {1});
  auto paths = derive_expected_paths(s.prog, s.g, s.lg, {"f", {0}, {}}, t);
  ASSERT_FALSE(paths.empty());
  EXPECT_EQ(slice_path(paths[0], s.g, s.prog).recursion, RecursionMode::FirstSelfInvocation);
}

TEST(SummarizeConstraint, CanonicalEp1) {
  Canonical c;
  auto specs = c.specs();
  const auto& ep1 = specs[0].constraints[0];
  EXPECT_EQ(ep1.id, "EP1");
  EXPECT_EQ(transitions(ep1),
            (std::vector<std::string>{"!(a[m_0] == x)", "x > a[m_0]", "L_1 == m_0 + 1", "beta",
                                      "m_1 == (L_1 + R_0) / 2", "a[m_1] == x"}));
  EXPECT_EQ(solve::to_string(ep1.post), "m_1 == 2");
  EXPECT_EQ(ep1.hole.kind, HoleKind::Condition);
  EXPECT_FALSE(ep1.hole.negated);
  EXPECT_EQ(ep1.hole.versions.at("L"), "L_1");
  EXPECT_EQ(ep1.hole.versions.at("R"), "R_0");
  EXPECT_EQ(ep1.folded_text(),
            "length == 3 && x == 2 && !(a[m_0] == 2) && 2 > a[m_0] && L_1 == m_0 + 1 && beta && "
            "m_1 == (L_1 + R_0) / 2 && a[m_1] == 2 => m_1 == 2");
}

TEST(SummarizeConstraint, CanonicalEp4NegatesTheHole) {
  Canonical c;
  auto specs = c.specs();
  const auto& ep4 = specs[1].constraints[1];
  EXPECT_EQ(ep4.id, "EP4");
  EXPECT_EQ(transitions(ep4), (std::vector<std::string>{"!(a[m_0] == x)", "!(x > a[m_0])",
                                                        "R_1 == m_0 - 1", "!beta"}));
  EXPECT_TRUE(solve::is_true(ep4.post));
  EXPECT_TRUE(ep4.hole.negated);
}

TEST(SummarizeConstraint, SingleAssignment) {
  Small s("int f(int x) { int y = x + 1; if (y > 9) { return 0; } return y; }");
  auto t = s.triplet(5, 0, {{"x", Value::of_int(4)}}, {1, 0, 0});
  auto cs = s.summarize({"f", {1}, {}}, t);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(transitions(cs[0]), (std::vector<std::string>{"y_1 == x + 1", "!beta"}));
  EXPECT_EQ(solve::to_string(cs[0].post), "y_1 == 5");
  EXPECT_EQ(cs[0].folded_text(), "x == 4 && y_1 == 5 && !beta => y_1 == 5");
}

TEST(SummarizeConstraint, SequenceRule) {
  Small s("int f(int x) { int a = 0; int b = a + x; int c = b * 2; return c; }");
  auto cs = s.summarize({"f", {0}, {}}, s.triplet(6, 4, {{"x", Value::of_int(2)}}, {3}));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(transitions(cs[0]),
            (std::vector<std::string>{"a_1 == beta", "b_1 == a_1 + x", "c_1 == b_1 * 2"}));
  EXPECT_EQ(solve::to_string(cs[0].post), "c_1 == 6");
  EXPECT_EQ(cs[0].hole.kind, HoleKind::AssignRhs);
}

TEST(SummarizeConstraint, IfRuleGivesOneConstraintPerBranch) {
  Small s("int f(int x) { int s = 1; if (x > 0) { s = s * x; } else { s = s - x; } return s; }");
  auto cs = s.summarize({"f", {0}, {}}, s.triplet(3, 4, {{"x", Value::of_int(3)}}, {2}));
  ASSERT_EQ(cs.size(), 2u);
  std::set<std::vector<std::string>> got{transitions(cs[0]), transitions(cs[1])};
  EXPECT_EQ(got, (std::set<std::vector<std::string>>{
                     {"s_1 == beta", "x > 0", "s_2 == s_1 * x"},
                     {"s_1 == beta", "!(x > 0)", "s_2 == s_1 - x"}}));
}

TEST(SummarizeConstraint, WhileRuleUsesTheLastRound) {
  Small s("int f(int n) { int i = 0; int s = 0; while (i < n) { s = s + i; i = i + 1; } return s; }");
  auto cs = s.summarize({"f", {2, 0, 0}, {}}, s.triplet(3, 5, {{"n", Value::of_int(3)}}, {3}));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(transitions(cs[0]),
            (std::vector<std::string>{"i_0 < n", "s_1 == beta", "i_1 == i_0 + 1", "!(i_1 < n)"}));
  EXPECT_EQ(solve::to_string(cs[0].post), "s_1 == 3");
}

TEST(SummarizeConstraint, LoopAfterTheFaultIsHavocked) {
  Small s("int f(int n) { int s = 0; int i = 0; while (i < n) { s = s + 2; i = i + 1; } return s; }");
  auto cs = s.summarize({"f", {0}, {}}, s.triplet(6, 7, {{"n", Value::of_int(3)}}, {3}));
  ASSERT_EQ(cs.size(), 2u);
  bool havocked = false;
  for (const auto& c : cs) {
    EXPECT_TRUE(ssa_well_formed(c)) << c.text();
    for (const auto& st : c.path.steps) havocked = havocked || !st.havoc.empty();
  }
  EXPECT_TRUE(havocked);
}

TEST(SummarizeConstraint, CallsBecomeFreeValues) {
  Small s("int g(int v) { return v * 2; }\nint f(int x) { int y = 0; y = g(x) + 1; return y; }");
  lang::Program p = lang::parse_program(
      "int f(int x) { int y = 0; y = g(x) + 1; return y; }\nint g(int v) { return v * 2; }");
  sym::SymEnv env = sym::make_env(p.entry_function(), sym::parse_pre(p, "true"), {});
  cfg::Cfg g = cfg::build_cfg(p.entry_function());
  cfg::LineGraph lg = cfg::line_graph(g);
  equiv::PathTriplet t;
  t.id = "P1";
  t.fault = true;
  t.theta_ref.value = Value::of_int(7);
  t.theta_tgt.value = Value::of_int(5);
  t.target_exit = lang::Location{"f", {2}, {}};
  auto paths = derive_expected_paths(p, g, lg, {"f", {0}, {}}, t);
  ASSERT_EQ(paths.size(), 1u);
  auto c = summarize_constraint(slice_path(paths[0], g, p), t, p, g, env);
  EXPECT_EQ(transitions(c), (std::vector<std::string>{"y_1 == beta", "y_2 == call_0 + 1"}));
  EXPECT_TRUE(ssa_well_formed(c));
}

TEST(SummarizeConstraint, SsaWellFormedOnCanonical) {
  Canonical c;
  for (const auto& fs : c.specs())
    for (const auto& k : fs.constraints) EXPECT_TRUE(ssa_well_formed(k)) << k.text();
}

TEST(SummarizeConstraint, SmtlibDumpMentionsTheHole) {
  Canonical c;
  auto specs = c.specs();
  std::string smt = specs[0].constraints[0].smtlib(c.eq.env);
  EXPECT_NE(smt.find("beta"), std::string::npos);
  EXPECT_NE(smt.find("(check-sat)"), std::string::npos);
  std::string table = specs[0].constraints[0].table(c.g);
  EXPECT_NE(table.find("L_1 == m_0 + 1"), std::string::npos);
}

TEST(PrunePaths, CanonicalReasons) {
  Canonical c;
  auto specs = c.specs();
  ASSERT_EQ(specs.size(), 2u);
  std::vector<std::string> rows;
  for (const auto& fs : specs)
    for (const auto& k : fs.constraints)
      rows.push_back(k.id + " " + (k.pruned ? k.reason : "kept"));
  EXPECT_EQ(rows, (std::vector<std::string>{"EP1 kept", "EP2 ArrayBounds",
                                            "EP3 ContradictsPre(sorted)", "EP4 kept"}));
}

TEST(PrunePaths, AllTrueConstraintIsRetained) {
  Small s("int f(int x) { int y = x; return y; }");
  auto cs = s.summarize({"f", {0}, {}}, s.triplet(1, 2, {{"x", Value::of_int(1)}}, {1}));
  auto log = prune_paths(cs, s.env);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_FALSE(cs[0].pruned);
}

// Pruned constraints have no model in a smaller box either, checked with an
// evaluator independent of the solver.
TEST(PrunePaths, PrunedConstraintsHaveNoBruteForceModel) {
  Canonical c;
  for (const auto& fs : c.specs())
    for (const auto& k : fs.constraints) {
      if (!k.pruned) continue;
      auto r = pathfix::testing::brute_force(k.formula(c.eq.env, nullptr, true), 5);
      EXPECT_FALSE(r.sat) << k.id;
      EXPECT_GT(r.tried, 0u);
    }
}

TEST(PrunePaths, OracleMayPruneButNotEverything) {
  Canonical c;
  cfg::LineGraph lg = cfg::line_graph(c.g);
  const auto& p2 = c.eq.triplets[1];
  FaultSpec keep = infer(c.target, c.fault, p2, c.eq.env, {}, {"EP1"});
  EXPECT_FALSE(keep.constraints[0].pruned);
  bool rejected = false;
  for (const auto& l : keep.log) rejected = rejected || l.reason.find("rejected") != std::string::npos;
  EXPECT_TRUE(rejected);

  const auto& p6 = c.eq.triplets[5];
  std::vector<ExpectedPathConstraint> cs;
  int k = 0;
  for (const auto& cand : derive_expected_paths(c.target, c.g, lg, c.fault, p6)) {
    cs.push_back(summarize_constraint(slice_path(cand, c.g, c.target), p6, c.target, c.g, c.eq.env));
    cs.back().id = "EP" + std::to_string(++k);
  }
  cs.push_back(cs.back());
  cs.back().id = "EP3";
  prune_paths(cs, c.eq.env, {"EP3"});
  EXPECT_FALSE(cs[1].pruned);
  EXPECT_TRUE(cs[2].oracle_pruned);
  EXPECT_EQ(cs[0].reason, "ContradictsPre(sorted)");
}

TEST(Infer, GroundTruthMakesRetainedConstraintsValid) {
  Canonical c;
  auto fix = lang::parse_expression("L <= R", {{"L", lang::Type::Int}, {"R", lang::Type::Int}});
  for (const auto& fs : c.specs())
    for (const auto* k : fs.retained()) {
      solve::Formula f;
      for (const auto& d : c.eq.env.inputs) f.declare(d);
      for (const auto& d : k->decls) f.declare(d);
      std::vector<solve::Term> parts{c.eq.env.pre, k->pre};
      for (const auto& t : k->transitions)
        parts.push_back(t.hole ? solve::substitute(t.term, {{k->hole.beta, k->hole_term(fix)}})
                               : t.term);
      parts.push_back(k->side);
      parts.push_back(solve::lnot(k->post));
      f.add(solve::conj(parts));
      f = solve::simplify(f, k->instantiation);
      EXPECT_EQ(solve::check_sat(f).status, solve::Status::Unsat) << k->id;
    }
}

TEST(Infer, CrashFallsBackToGuard) {
  lang::Program p = lang::parse_program("int f(int a, int b) { return a / b; }");
  lang::Program r = lang::parse_program(
      "int f(int a, int b) { if (b == 0) { return 0; } return a / b; }");
  auto pre = sym::parse_pre(p, "true");
  auto eq = equiv::check_equivalence(p, r, pre);
  ASSERT_EQ(eq.fault_count(), 1u);
  for (const auto& t : eq.triplets) {
    if (!t.fault) continue;
    FaultSpec fs = infer(p, {"f", {0}, {}}, t, eq.env);
    EXPECT_TRUE(fs.synthetic);
    ASSERT_FALSE(fs.retained().empty());
    EXPECT_EQ(fs.retained()[0]->hole.kind, HoleKind::Guard);
  }
}

TEST(TraceConsistency, GroundTruthPatchFollowsARetainedPath) {
  Canonical c;
  auto fix = lang::parse_expression("L <= R", {{"L", lang::Type::Int}, {"R", lang::Type::Int}});
  lang::Program patched = lang::apply_patch(c.target, c.fault, fix);
  lang::InterpOptions io;
  io.trace = true;
  for (const auto& fs : c.specs()) {
    auto run = lang::interpret(patched, fs.triplet.witness_inputs, 100000, io);
    EXPECT_TRUE(trace_consistent(fs, c.g, run, fs.triplet.witness, fix, c.eq.env)) << fs.triplet.id;
  }
}

TEST(TraceConsistency, BuggyProgramDoesNotMatch) {
  Canonical c;
  auto bug = lang::parse_expression("L <= m", {{"L", lang::Type::Int}, {"m", lang::Type::Int}});
  lang::InterpOptions io;
  io.trace = true;
  auto specs = c.specs();
  auto run = lang::interpret(c.target, specs[0].triplet.witness_inputs, 100000, io);
  EXPECT_FALSE(trace_consistent(specs[0], c.g, run, specs[0].triplet.witness, bug, c.eq.env));
}

TEST(TraceConsistency, ValuationReadsSsaVersionsOffTheTrace) {
  Canonical c;
  auto fix = lang::parse_expression("L <= R", {{"L", lang::Type::Int}, {"R", lang::Type::Int}});
  lang::Program patched = lang::apply_patch(c.target, c.fault, fix);
  lang::InterpOptions io;
  io.trace = true;
  auto specs = c.specs();
  const auto& ep1 = specs[0].constraints[0];
  auto run = lang::interpret(patched, specs[0].triplet.witness_inputs, 100000, io);
  auto v = valuation_from_trace(ep1, c.g, run, specs[0].triplet.witness);
  ASSERT_TRUE(v.has_value());
  // a = {0,1,2}, x = 2: m_0 = 1, L_1 = 2, R_0 = 2, m_1 = 2
  EXPECT_EQ(v->at("m_0").i, 1);
  EXPECT_EQ(v->at("L_1").i, 2);
  EXPECT_EQ(v->at("R_0").i, 2);
  EXPECT_EQ(v->at("m_1").i, 2);
}

TEST(TraceConsistency, EvaluateOnTraceClassifiesCanonicalConstraints) {
  Canonical c;
  auto fix = lang::parse_expression("L <= R", {{"L", lang::Type::Int}, {"R", lang::Type::Int}});
  auto bug = lang::parse_expression("L <= m", {{"L", lang::Type::Int}, {"m", lang::Type::Int}});
  lang::InterpOptions io;
  io.trace = true;
  for (const auto& fs : c.specs()) {
    auto good = lang::interpret(lang::apply_patch(c.target, c.fault, fix), fs.triplet.witness_inputs,
                                100000, io);
    auto bad = lang::interpret(c.target, fs.triplet.witness_inputs, 100000, io);
    for (const auto* k : fs.retained()) {
      auto g = evaluate_on_trace(*k, c.g, good, fs.triplet.witness, fix, c.eq.env);
      EXPECT_NE(g, TraceVerdict::Violated) << k->id;
      auto b = evaluate_on_trace(*k, c.g, bad, fs.triplet.witness, bug, c.eq.env);
      EXPECT_NE(b, TraceVerdict::Holds) << k->id;
    }
  }
}

TEST(TraceConsistency, HoleOutsideTheLastRoundIsVacuous) {
  auto cc = pathfix::testing::load_case("shortest_path");
  auto pre = sym::parse_pre(cc.buggy, pathfix::testing::read_text("corpus/shortest_path/pre.txt"));
  auto eq = equiv::check_equivalence(cc.buggy, cc.reference, pre);
  auto fix = lang::parse_expression("d1 + w[1]", {{"d1", lang::Type::Int}, {"w", lang::Type::IntArray}});
  auto patched = lang::apply_patch(cc.buggy, cc.fault, fix);
  auto g = cfg::build_cfg(cc.buggy.entry_function());
  lang::InterpOptions io;
  io.trace = true;
  std::set<TraceVerdict> seen;
  for (const auto& t : eq.triplets) {
    if (!t.fault) continue;
    auto fs = infer(cc.buggy, cc.fault, t, eq.env);
    auto run = lang::interpret(patched, t.witness_inputs, 100000, io);
    for (const auto* k : fs.retained()) {
      auto v = evaluate_on_trace(*k, g, run, t.witness, fix, eq.env);
      EXPECT_NE(v, TraceVerdict::Violated) << t.id << " " << k->id;
      seen.insert(v);
    }
  }
  EXPECT_TRUE(seen.count(TraceVerdict::Vacuous));
}

TEST(TraceConsistency, RecursionReadsTheOuterActivation) {
  auto cc = pathfix::testing::load_case("fibonacci");
  auto pre = sym::parse_pre(cc.buggy, pathfix::testing::read_text("corpus/fibonacci/pre.txt"));
  auto eq = equiv::check_equivalence(cc.buggy, cc.reference, pre);
  auto fix = lang::parse_expression("n <= 1", {{"n", lang::Type::Int}});
  auto patched = lang::apply_patch(cc.buggy, cc.fault, fix);
  auto g = cfg::build_cfg(cc.buggy.entry_function());
  lang::InterpOptions io;
  io.trace = true;
  int checked = 0;
  for (const auto& t : eq.triplets) {
    if (!t.fault) continue;
    auto fs = infer(cc.buggy, cc.fault, t, eq.env);
    auto run = lang::interpret(patched, t.witness_inputs, 100000, io);
    EXPECT_TRUE(trace_consistent(fs, g, run, t.witness, fix, eq.env)) << t.id;
    ++checked;
  }
  EXPECT_GT(checked, 0);
}
