#include <gtest/gtest.h>

#include <cstdlib>

#include "oracles.hpp"
#include "pathfix/solve/solver.hpp"

using namespace pathfix::solve;
using pathfix::lang::Value;
using pathfix::testing::brute_force;
using pathfix::testing::oracle_bool;
using pathfix::testing::random_formula;

namespace {

Term I(const std::string& n) { return var(n, Sort::Int); }
Term C(std::int64_t v) { return int_const(v); }
Term A(const std::string& n) { return var(n, Sort::Array); }

SolverConfig bound(int b) {
  SolverConfig c;
  c.int_bound = b;
  return c;
}

}  // namespace

TEST(CheckSat, ArrayBoundsViolationIsUnsat) {
  Formula f;
  f.decls = {{"m_0", Sort::Int, 0}, {"length", Sort::Int, 0}};
  f.body = conj({eq(I("m_0"), C(3)), binary(Op::Le, C(0), I("m_0")),
                 binary(Op::Le, I("m_0"), binary(Op::Sub, I("length"), C(1))),
                 eq(I("length"), C(3))});
  EXPECT_EQ(check_sat(f).status, Status::Unsat);
}

TEST(CheckSat, SortednessViolationIsUnsat) {
  Formula f;
  f.decls = {{"a", Sort::Array, 3}, {"m_0", Sort::Int, 0}, {"x", Sort::Int, 0}};
  f.body = conj({binary(Op::Lt, select(A("a"), C(0)), select(A("a"), C(1))),
                 binary(Op::Lt, select(A("a"), C(1)), select(A("a"), C(2))),
                 binary(Op::Lt, select(A("a"), I("m_0")), I("x")),
                 binary(Op::Lt, I("x"), select(A("a"), C(0))),
                 binary(Op::Le, C(0), I("m_0")), binary(Op::Le, I("m_0"), C(2))});
  EXPECT_EQ(check_sat(f).status, Status::Unsat);
}

TEST(CheckSat, IntervalModel) {
  Formula f;
  f.decls = {{"x_0", Sort::Int, 0}};
  f.body = conj({binary(Op::Gt, I("x_0"), C(0)), binary(Op::Lt, I("x_0"), C(3))});
  auto r = check_sat(f, bound(4));
  ASSERT_EQ(r.status, Status::Sat);
  std::int64_t x = r.model.at("x_0").i;
  EXPECT_TRUE(x == 1 || x == 2);
  EXPECT_EQ(x, 1);  // 1 precedes 2 in search order
}

TEST(CheckSat, SearchOrderStartsFromZeroOutward) {
  Formula f;
  f.decls = {{"x", Sort::Int, 0}, {"y", Sort::Int, 0}};
  f.body = binary(Op::Lt, I("x"), I("y"));
  auto r = check_sat(f, bound(3));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_EQ(r.model.at("x").i, 0);
  EXPECT_EQ(r.model.at("y").i, 1);

  f.body = binary(Op::Lt, I("x"), C(0));
  r = check_sat(f, bound(3));
  EXPECT_EQ(r.model.at("x").i, -1);
}

TEST(CheckSat, UndefinedAtomsAreFalse) {
  Formula f;
  f.decls = {{"x", Sort::Int, 0}, {"a", Sort::Array, 2}};
  f.body = eq(binary(Op::Div, C(4), I("x")), binary(Op::Div, C(4), I("x")));
  auto r = check_sat(f, bound(2));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_NE(r.model.at("x").i, 0);
  f.body = lnot(eq(select(A("a"), I("x")), select(A("a"), I("x"))));
  r = check_sat(f, bound(2));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_TRUE(r.model.at("x").i < 0 || r.model.at("x").i > 1);
}

TEST(CheckSat, StoreChains) {
  Formula f;
  f.decls = {{"a", Sort::Array, 3}, {"i", Sort::Int, 0}};
  Term a1 = store(A("a"), I("i"), C(7));
  f.body = conj({eq(select(a1, C(2)), C(7)), eq(select(A("a"), C(2)), C(1))});
  auto r = check_sat(f, bound(8));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_EQ(r.model.at("i").i, 2);
  f.body = eq(select(store(A("a"), C(5), C(1)), C(0)), C(0));
  EXPECT_EQ(check_sat(f, bound(2)).status, Status::Unsat);
}

TEST(CheckSat, BudgetGivesUnknown) {
  Formula f;
  f.decls = {{"p", Sort::Int, 0}, {"q", Sort::Int, 0}, {"r", Sort::Int, 0}};
  f.body = eq(binary(Op::Add, binary(Op::Mul, I("p"), I("q")), I("r")), C(1000));
  SolverConfig c = bound(16);
  c.node_budget = 50;
  EXPECT_EQ(check_sat(f, c).status, Status::Unknown);
  c.node_budget = 10'000'000;
  EXPECT_EQ(check_sat(f, c).status, Status::Unsat);
}

TEST(CheckSat, IndependentComponentsSolveSeparately) {
  Formula f;
  std::vector<Term> cs;
  for (int k = 0; k < 12; ++k) {
    std::string n = "v" + std::to_string(k);
    f.decls.push_back({n, Sort::Int, 0});
    cs.push_back(binary(Op::Gt, I(n), C(k % 5)));
  }
  f.decls.push_back({"w", Sort::Int, 0});
  cs.push_back(binary(Op::Gt, binary(Op::Mul, I("w"), I("w")), C(400)));
  f.body = conj(cs);
  auto r = check_sat(f);
  EXPECT_EQ(r.status, Status::Unsat);
  EXPECT_LT(r.nodes, 10'000u);
}

TEST(Simplify, FoldsBindings) {
  Formula f;
  f.decls = {{"length", Sort::Int, 0}, {"m_1", Sort::Int, 0}, {"L_1", Sort::Int, 0},
             {"R_0", Sort::Int, 0}};
  f.body = conj({eq(I("length"), C(3)),
                 eq(I("m_1"), binary(Op::Div, binary(Op::Add, I("L_1"), I("R_0")), C(2)))});
  Formula g = simplify(f, {{"L_1", Value::of_int(2)}, {"R_0", Value::of_int(2)}});
  EXPECT_EQ(to_string(g.body), "length == 3 && m_1 == 2");
  EXPECT_EQ(g.decls.size(), 2u);
}

TEST(Simplify, Idempotence) {
  Formula f;
  f.decls = {{"x", Sort::Int, 0}};
  Term p = binary(Op::Gt, I("x"), C(0));
  f.body = binary(Op::And, binary(Op::And, p, bool_const(true)), p);
  EXPECT_EQ(to_string(simplify(f).body), "x > 0");
}

TEST(Simplify, InstantiatesArrays) {
  Formula f;
  f.decls = {{"a", Sort::Array, 3}, {"x", Sort::Int, 0}, {"m_0", Sort::Int, 0}};
  f.body = conj({eq(select(A("a"), C(1)), I("x")), binary(Op::Lt, select(A("a"), I("m_0")), I("x"))});
  Formula g = simplify(f, {{"a", Value::of_array({-1, 0, 1})}, {"x", Value::of_int(1)}});
  EXPECT_EQ(to_string(g.body), "false");
  Formula h = simplify(f, {{"a", Value::of_array({-1, 0, 1})}, {"x", Value::of_int(0)}});
  EXPECT_EQ(to_string(h.body), "{-1,0,1}[m_0] < 0");
}

TEST(Simplify, PreservesVerdicts) {
  std::mt19937 rng(17);
  for (int k = 0; k < 300; ++k) {
    Formula f = random_formula(rng, 3, 2);
    Model bind;
    bind[f.decls[0].name] =
        f.decls[0].sort == Sort::Bool ? Value::of_bool(k % 2) : Value::of_int(k % 5 - 2);
    Formula g = simplify(f, bind);
    auto a = check_sat(f.decls.size() ? [&] {
      Formula h = f;
      h.add(f.decls[0].sort == Sort::Bool
                ? eq(var(f.decls[0].name, Sort::Bool), bool_const(k % 2))
                : eq(I(f.decls[0].name), C(k % 5 - 2)));
      return h;
    }() : f, bound(4));
    auto b = check_sat(g, bound(4));
    ASSERT_EQ(a.status, b.status) << to_string(f.body) << " ~> " << to_string(g.body);
  }
}

TEST(Printer, MinimalParentheses) {
  Term t = binary(Op::Sub, I("a"), binary(Op::Sub, I("b"), C(-1)));
  EXPECT_EQ(to_string(t), "a - (b - -1)");
  EXPECT_EQ(to_string(implies(implies(bool_const(true), bool_const(false)), bool_const(true))),
            "(true => false) => true");
}

TEST(SmtLib, DirectMapping) {
  Formula f;
  f.decls = {{"x_0", Sort::Int, 0}};
  f.body = binary(Op::Gt, I("x_0"), C(2));
  std::string s = to_smtlib(f);
  EXPECT_NE(s.find("(declare-const x_0 (_ BitVec 64))"), std::string::npos);
  EXPECT_NE(s.find("(assert (bvsgt x_0 (_ bv2 64)))"), std::string::npos);
}

TEST(SmtLib, ArrayReadExpandsToIteChain) {
  Formula f;
  f.decls = {{"a", Sort::Array, 3}, {"m_0", Sort::Int, 0}};
  f.body = eq(select(A("a"), I("m_0")), C(1));
  std::string s = to_smtlib(f);
  EXPECT_NE(s.find("(ite (= m_0 (_ bv0 64)) |a@0| (ite (= m_0 (_ bv1 64)) |a@1| |a@2|))"), std::string::npos);
}

TEST(SmtLib, FalseIsUnsatText) {
  Formula f;
  f.body = bool_const(false);
  EXPECT_NE(to_smtlib(f).find("(assert false)"), std::string::npos);
}

// Runs only where an external solver is installed.
TEST(SmtLib, AgreesWithExternalSolver) {
  if (std::system("command -v z3 >/dev/null 2>&1") != 0) GTEST_SKIP() << "z3 not installed";
  std::mt19937 rng(5);
  int compared = 0;
  for (int k = 0; k < 50; ++k) {
    Formula f = random_formula(rng, 3, 2);
    if (k % 2 == 0) {
      f.decls.push_back({"arr", Sort::Array, 3});
      f.add(binary(Op::Lt, select(A("arr"), I(f.decls[0].sort == Sort::Int ? f.decls[0].name : "z")),
                   C(1)));
      f.declare({"z", Sort::Int, 0});
    }
    auto ours = check_sat(f, bound(4));
    if (ours.status == Status::Unknown) continue;
    Status theirs = run_external("z3 -in", to_smtlib(f, 4));
    ASSERT_EQ(ours.status, theirs) << to_smtlib(f, 4);
    ++compared;
  }
  EXPECT_EQ(compared, 50);
}

// Oracle agreement: verdicts match brute force and models satisfy.
TEST(SolveProperty, OracleAgreement) {
  std::mt19937 rng(2024);
  for (int k = 0; k < 400; ++k) {
    Formula f = random_formula(rng, 1 + k % 4, 3);
    auto ours = check_sat(f, bound(5));
    auto brute = brute_force(f, 5);
    if (ours.status == Status::Unknown) continue;
    ASSERT_EQ(ours.status == Status::Sat, brute.sat) << to_string(f.body);
    if (brute.sat) {
      ASSERT_TRUE(oracle_bool(f.body, ours.model)) << to_string(f.body);
      ASSERT_TRUE(evaluate(f.body, ours.model));
      for (const auto& [n, v] : brute.first) ASSERT_EQ(ours.model.at(n), v) << to_string(f.body);
    }
  }
}
