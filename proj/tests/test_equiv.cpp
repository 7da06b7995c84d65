#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pathfix/equiv/equiv.hpp"
#include "pathfix/lang/parser.hpp"
#include "support.hpp"

using namespace pathfix;
using namespace pathfix::equiv;
using lang::Value;

namespace {

const char* kPre = "len(a) == 3 && length == 3 && a[0] < a[1] && a[1] < a[2]";

struct Canonical {
  lang::Program target = pathfix::testing::load_program("fixtures/programs/bin_search_buggy.mc");
  lang::Program reference = pathfix::testing::load_program("fixtures/programs/lin_search_ref.mc");
  EquivResult run() {
    return check_equivalence(target, reference, sym::parse_pre(target, kPre));
  }
};

std::vector<Value> bs(std::vector<std::int64_t> a, std::int64_t x) {
  auto n = static_cast<std::int64_t>(a.size());
  return {Value::of_array(std::move(a)), Value::of_int(n), Value::of_int(x)};
}

}  // namespace

TEST(CheckEquivalence, CanonicalTable) {
  Canonical c;
  EquivResult r = c.run();
  ASSERT_EQ(r.triplets.size(), 6u);
  EXPECT_EQ(r.fault_count(), 2u);
  std::vector<std::string> rows;
  for (const auto& t : r.triplets)
    rows.push_back(t.id + " " + t.theta_ref.str() + "," + t.theta_tgt.str() + (t.fault ? " x" : " ok"));
  EXPECT_EQ(rows, (std::vector<std::string>{"P1 1,1 ok", "P2 2,-1 x", "P3 -1,-1 ok", "P4 0,0 ok",
                                            "P5 -1,-1 ok", "P6 -1,BoundExhausted x"}));
  EXPECT_EQ(solve::to_string(r.triplets[0].input_condition), "a[1] == x && !(a[0] == x)");
}

// Every input of the bounded domain lies in exactly one region, and the
// region's fault flag matches the concrete outcomes on that input.
TEST(CheckEquivalence, CoverageAndFaultFlagsByBruteForce) {
  Canonical c;
  EquivResult r = c.run();
  sym::SymOptions so;
  int inputs = 0;
  for (int a0 = -2; a0 <= 2; ++a0)
    for (int a1 = a0 + 1; a1 <= 2; ++a1)
      for (int a2 = a1 + 1; a2 <= 2; ++a2)
        for (int x = -4; x <= 4; ++x) {
          auto in = bs({a0, a1, a2}, x);
          solve::Model m = sym::model_from_inputs(r.env, in);
          int hits = 0;
          const PathTriplet* hit = nullptr;
          for (const auto& t : r.triplets)
            if (pathfix::testing::oracle_bool(t.input_condition, m)) {
              ++hits;
              hit = &t;
            }
          ASSERT_EQ(hits, 1) << a0 << a1 << a2 << " x=" << x;
          Theta tt = Theta::of(run_bounded(c.target, in, so));
          Theta tr = Theta::of(run_bounded(c.reference, in, so));
          // Regions here have constant outcomes, so the flag is exact per input.
          EXPECT_EQ(hit->fault, tt != tr);
          ++inputs;
        }
  EXPECT_EQ(inputs, 10 * 9);
}

TEST(CheckEquivalence, WitnessesReproduceOutcomes) {
  Canonical c;
  EquivResult r = c.run();
  sym::SymOptions so;
  for (const auto& t : r.triplets) {
    EXPECT_TRUE(pathfix::testing::oracle_bool(t.input_condition, t.witness)) << t.id;
    EXPECT_TRUE(pathfix::testing::oracle_bool(r.env.pre, t.witness)) << t.id;
    EXPECT_EQ(Theta::of(run_bounded(c.target, t.witness_inputs, so)), t.theta_tgt);
    EXPECT_EQ(Theta::of(run_bounded(c.reference, t.witness_inputs, so)), t.theta_ref);
  }
}

TEST(CheckEquivalence, Reflexive) {
  Canonical c;
  EquivResult r = check_equivalence(c.reference, c.reference, sym::parse_pre(c.reference, kPre));
  EXPECT_FALSE(r.triplets.empty());
  EXPECT_EQ(r.fault_count(), 0u);
}

TEST(CheckEquivalence, ConstantVersusIdentity) {
  auto t = lang::parse_program("int f(int x){ return x; }");
  auto ref = lang::parse_program("int g(int y){ return 0; }");
  EquivResult r = check_equivalence(t, ref, nullptr);
  ASSERT_EQ(r.triplets.size(), 1u);
  EXPECT_TRUE(r.triplets[0].fault);
  EXPECT_NE(r.triplets[0].witness_inputs[0].i, 0);
}

TEST(CheckEquivalence, BothBoundedIsWarningNotFault) {
  auto t = lang::parse_program("int f(int x){ while (true) { x = x + 1; } return x; }");
  EquivResult r = check_equivalence(t, t, nullptr);
  ASSERT_EQ(r.triplets.size(), 1u);
  EXPECT_FALSE(r.triplets[0].fault);
  EXPECT_FALSE(r.triplets[0].warning.empty());
}

TEST(CheckEquivalence, SignatureMismatch) {
  auto t = lang::parse_program("int f(int x){ return x; }");
  auto ref = lang::parse_program("int g(int x, int y){ return 0; }");
  try {
    check_equivalence(t, ref, nullptr);
    FAIL();
  } catch (const EquivError& e) {
    EXPECT_EQ(e.kind(), EquivError::Kind::SignatureMismatch);
  }
}

TEST(FaultsFromTests, FailingTestGeneralizes) {
  Canonical c;
  TestCase tc{bs({1, 2, 3}, 3), {}};
  tc.expected.value = Value::of_int(2);
  EquivResult r = faults_from_tests(c.target, {tc}, nullptr);
  ASSERT_EQ(r.triplets.size(), 1u);
  EXPECT_EQ(r.triplets[0].theta_tgt.str(), "-1");
  std::string pi = solve::to_string(r.triplets[0].input_condition);
  EXPECT_NE(pi.find("x > a[1]"), std::string::npos) << pi;
  EXPECT_TRUE(pathfix::testing::oracle_bool(r.triplets[0].input_condition, r.triplets[0].witness));
}

TEST(FaultsFromTests, PassingTestsGiveNothing) {
  Canonical c;
  TestCase tc{bs({1, 2, 3}, 2), {}};
  tc.expected.value = Value::of_int(1);
  EXPECT_TRUE(faults_from_tests(c.target, {tc}, nullptr).triplets.empty());
}

TEST(FaultsFromTests, SamePathDeduplicated) {
  Canonical c;
  TestCase t1{bs({1, 2, 3}, 3), {}};
  t1.expected.value = Value::of_int(2);
  TestCase t2{bs({1, 2, 4}, 4), {}};
  t2.expected.value = Value::of_int(2);
  EXPECT_EQ(faults_from_tests(c.target, {t1, t2}, nullptr).triplets.size(), 1u);
}

TEST(TestsJson, RoundTrip) {
  Canonical c;
  const auto& fn = c.target.entry_function();
  auto tests = parse_tests(
      R"([{"inputs": [[1,2,3], 3, 3], "expected": 2}, {"inputs": [[1,2,3], 3, 0], "expected": "BoundExhausted"}])",
      fn);
  ASSERT_EQ(tests.size(), 2u);
  EXPECT_EQ(tests[1].expected.kind, Theta::Kind::Bound);
  EXPECT_EQ(parse_tests(tests_to_json(tests), fn)[0].inputs, tests[0].inputs);
  EXPECT_THROW(parse_tests(R"([{"inputs": [1], "expected": 2}])", fn), EquivError);
  EXPECT_THROW(parse_tests("{", fn), EquivError);
}
