#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "pathfix/driver/driver.hpp"
#include "support.hpp"

using namespace pathfix;
namespace pft = pathfix::testing;
using namespace pathfix::driver;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kPre = "len(a) == 3 && length == 3 && a[0] < a[1] && a[1] < a[2]";

RepairConfig canonical() {
  RepairConfig c;
  c.target = pft::source_path("fixtures/programs/bin_search_buggy.mc");
  c.reference = pft::source_path("corpus/bin_search/reference.mc");
  c.fault_loc = "bin_search:7";
  c.pre = kPre;
  c.case_id = "bin_search";
  return c;
}

const json& canonical_report() {
  static const json r = run_repair(canonical()).report;
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pathfix_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST(Golden, CanonicalShape) {
  const auto& r = canonical_report();
  EXPECT_EQ(r["outcome"], "Fixed");
  EXPECT_EQ(r["exit_code"], 0);
  ASSERT_EQ(r["triplets"].size(), 6u);
  std::vector<std::string> faults;
  for (const auto& t : r["triplets"])
    if (t["fault"].get<bool>()) faults.push_back(t["id"]);
  EXPECT_EQ(faults, (std::vector<std::string>{"P2", "P6"}));

  std::map<std::string, std::string> reasons;
  for (const auto& c : r["candidate_paths"]) reasons[c["id"]] = c["reason"];
  EXPECT_EQ(reasons["EP1"], "retained");
  EXPECT_EQ(reasons["EP2"], "ArrayBounds");
  EXPECT_EQ(reasons["EP3"], "ContradictsPre(sorted)");
  EXPECT_EQ(reasons["EP4"], "retained");
  EXPECT_EQ(r["patch"]["expression"], "L <= R");
  EXPECT_EQ(r["patch"]["location"], "bin_search:7:3");
  EXPECT_TRUE(r["verification"]["accepted"].get<bool>());
}

TEST(Golden, MatchesFrozenReport) {
  const auto& r = canonical_report();
  auto g = json::parse(pft::read_text("fixtures/golden/bin_search.json"));
  EXPECT_EQ(r["triplets"], g["triplets"]);
  EXPECT_EQ(r["triplet_summary"], g["triplet_summary"]);
  ASSERT_EQ(r["candidate_paths"].size(), g["candidate_paths"].size());
  for (std::size_t i = 0; i < g["candidate_paths"].size(); ++i)
    for (const auto& [k, v] : g["candidate_paths"][i].items())
      EXPECT_EQ(r["candidate_paths"][i][k], v) << "candidate " << i << " field " << k;
  ASSERT_EQ(r["constraints"].size(), g["constraints"].size());
  for (std::size_t i = 0; i < g["constraints"].size(); ++i)
    for (const auto& [k, v] : g["constraints"][i].items())
      EXPECT_EQ(r["constraints"][i][k], v) << "constraint " << i << " field " << k;
  for (const auto& [k, v] : g["patch"].items()) EXPECT_EQ(r["patch"][k], v) << k;
  for (const auto& [k, v] : g["synthesis"].items()) EXPECT_EQ(r["synthesis"][k], v) << k;
}

TEST(Golden, RejectedNearMissLogged) {
  bool seen = false;
  for (const auto& c : canonical_report()["synthesis"]["candidates"])
    if (c["expr"] == "L > m") {
      EXPECT_EQ(c["verdict"], "rejected");
      EXPECT_EQ(c["reason"], "fault path P2 still faulty");
      seen = true;
    }
  EXPECT_TRUE(seen);
}

TEST(Repair, DeterministicModuloTiming) {
  auto again = run_repair(canonical()).report;
  EXPECT_EQ(strip_timing(again), strip_timing(canonical_report()));
  EXPECT_TRUE(canonical_report().contains("timing"));
  EXPECT_FALSE(strip_timing(again).contains("timing"));
}

TEST(Repair, TestsOnlyMode) {
  auto c = canonical();
  c.reference.clear();
  c.tests = pft::source_path("corpus/bin_search/tests.json");
  auto run = run_repair(c);
  EXPECT_EQ(run.report["outcome"], "Fixed");
  EXPECT_EQ(run.exit, ExitCode::Ok);
}

TEST(Repair, EquivalentTargetIsNothingToRepair) {
  auto c = canonical();
  c.target = c.reference;
  auto run = run_repair(c);
  EXPECT_EQ(run.report["outcome"], "NothingToRepair");
  EXPECT_EQ(run.exit, ExitCode::Ok);
  EXPECT_FALSE(run.report["warnings"].empty());
  EXPECT_TRUE(run.report["patch"].is_null());
}

TEST(Repair, SpectrumFindsLoopCondition) {
  auto c = canonical();
  c.fault_loc.clear();
  auto run = run_repair(c);
  EXPECT_EQ(run.report["outcome"], "Fixed");
  EXPECT_EQ(run.report["fault_location"], "bin_search:7:3");
}

TEST(Repair, WritesReportAndArtifacts) {
  auto dir = scratch("artifacts");
  auto c = canonical();
  c.output = (dir / "r.json").string();
  c.emit_dot = c.emit_smt = true;
  run_repair(c);
  ASSERT_TRUE(fs::exists(dir / "r.json"));
  auto r = json::parse(std::ifstream(dir / "r.json"));
  EXPECT_EQ(r["outcome"], "Fixed");
  EXPECT_TRUE(fs::exists(dir / "r.json.dot"));
  EXPECT_TRUE(fs::exists(dir / "r.json.smt2"));
}

TEST(Repair, ErrorsCarryExitCodes) {
  auto code = [](RepairConfig c) {
    try {
      run_repair(c);
    } catch (const DriverError& e) {
      return e.code();
    }
    return ExitCode::Ok;
  };
  auto c = canonical();
  c.target = "/nonexistent/x.mc";
  EXPECT_EQ(code(c), ExitCode::Io);

  auto dir = scratch("errors");
  write(dir / "bad.mc", "int f( {");
  c = canonical();
  c.target = (dir / "bad.mc").string();
  EXPECT_EQ(code(c), ExitCode::Parse);

  c = canonical();
  c.pre = "a[0] <";
  EXPECT_EQ(code(c), ExitCode::Parse);

  c = canonical();
  c.fault_loc = "bin_search:99";
  EXPECT_EQ(code(c), ExitCode::Usage);
}

TEST(Config, Validate) {
  RepairConfig c;
  EXPECT_THROW(c.validate(), DriverError);
  c.target = "t.mc";
  EXPECT_THROW(c.validate(), DriverError);
  c.tests = "t.json";
  EXPECT_NO_THROW(c.validate());
  c.synth.budget = 0;
  EXPECT_THROW(c.validate(), DriverError);
  c.synth.budget = 10;
  c.oracle.backend = oracle::Backend::Http;
  EXPECT_THROW(c.validate(), DriverError);
}

TEST(Location, Resolve) {
  auto p = pft::load_program("fixtures/programs/bin_search_buggy.mc");
  auto l = resolve_location(p, "bin_search:7");
  EXPECT_EQ(l.span.line, 7);
  EXPECT_EQ(resolve_location(p, "bin_search:7:3"), l);
  EXPECT_THROW(resolve_location(p, "bin_search"), DriverError);
  EXPECT_THROW(resolve_location(p, "nope:7"), DriverError);
  EXPECT_THROW(resolve_location(p, "bin_search:x"), DriverError);
  EXPECT_THROW(resolve_location(p, "bin_search:7:9"), DriverError);
}

TEST(Diff, SingleLineChange) {
  std::string a = "1\n2\n3\n4\n5\n6\n7\n8\n", b = "1\n2\n3\n4\nX\n6\n7\n8\n";
  EXPECT_EQ(unified_diff(a, b, "f"),
            "--- a/f\n+++ b/f\n@@ -2,7 +2,7 @@\n 2\n 3\n 4\n-5\n+X\n 6\n 7\n 8\n");
  EXPECT_EQ(unified_diff(a, a, "f"), "");
}

TEST(Oracle, StubMatchesOffVerdict) {
  auto c = canonical();
  c.oracle.backend = oracle::Backend::Stub;
  c.oracle.fixture_dir = pft::source_path("fixtures/oracle");
  auto r = run_repair(c).report;
  EXPECT_EQ(r["outcome"], canonical_report()["outcome"]);
  EXPECT_EQ(r["patch"]["expression"], canonical_report()["patch"]["expression"]);
  EXPECT_EQ(r["patch"]["provenance"]["kind"], "OracleSuggested");
  EXPECT_TRUE(r["oracle"]["hints_used"].get<bool>());
}

TEST(Oracle, AdversarialHintsAreFiltered) {
  auto c = canonical();
  c.oracle.backend = oracle::Backend::Stub;
  c.oracle.fixture_dir = pft::source_path("fixtures/oracle");
  c.case_id = "bin_search_adversarial";
  auto r = run_repair(c).report;
  EXPECT_EQ(r["outcome"], "Fixed");
  EXPECT_EQ(r["patch"]["expression"], "L <= R");
  EXPECT_NE(r["patch"]["provenance"]["kind"], "OracleSuggested");
  for (const auto& cand : r["synthesis"]["candidates"])
    if (cand["round"] == 0) EXPECT_EQ(cand["verdict"], "rejected") << cand["expr"];
}

TEST(Bench, EmptyCorpus) {
  auto dir = scratch("empty");
  auto s = run_bench(dir.string(), RepairConfig{});
  EXPECT_TRUE(s.rows.empty());
  EXPECT_EQ(s.fixed(), 0u);
  EXPECT_NE(s.table().find("total"), std::string::npos);
}

TEST(Bench, BrokenCaseDoesNotAffectOthers) {
  auto dir = scratch("bench");
  fs::create_directories(dir / "a_broken");
  write(dir / "a_broken" / "buggy.mc", "int f( {");
  write(dir / "a_broken" / "tests.json", "[]");
  fs::copy(pft::source_path("corpus/gcd"), dir / "gcd");
  auto s = run_bench(dir.string(), RepairConfig{});
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.rows[0].outcome, "Error");
  EXPECT_FALSE(s.rows[0].error.empty());
  EXPECT_EQ(s.rows[1].outcome, "Fixed");
  EXPECT_EQ(s.to_json(false)["fixed"], 1);
  EXPECT_FALSE(s.to_json(false).contains("timing"));
}

TEST(Bench, MissingCorpusIsIoError) {
  EXPECT_THROW(run_bench("/nonexistent/corpus", RepairConfig{}), DriverError);
}

TEST(Corpus, GroundTruthMatchesReferenceOnBoundedInputs) {
  for (const auto& id : pft::corpus_ids()) {
    auto c = pft::load_case(id);
    auto in = pft::bounded_inputs(c);
    EXPECT_GT(in.size(), 0u) << id;
    EXPECT_EQ(pft::disagreements(pft::ground_truth(c), c.reference, in), 0u) << id;
    EXPECT_GT(pft::disagreements(c.buggy, c.reference, in), 0u) << id;
  }
}
