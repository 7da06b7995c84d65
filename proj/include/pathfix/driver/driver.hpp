#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathfix/lang/ast.hpp"
#include "pathfix/oracle/oracle.hpp"
#include "pathfix/sym/sym.hpp"
#include "pathfix/synth/synth.hpp"

namespace pathfix::driver {

/// Process exit codes of `pathfix`.
enum class ExitCode {
  Ok = 0,               // Fixed or NothingToRepair
  SynthesisFailed = 1,  // SynthesisError
  ConstraintFailed = 2, // ConstraintError
  Usage = 3,            // bad flags or configuration
  Io = 4,               // unreadable input or unwritable output
  Parse = 5,            // program, pre-condition or tests do not parse
  Internal = 6,
};

class DriverError : public std::runtime_error {
 public:
  DriverError(ExitCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct RepairConfig {
  std::string target;
  std::string reference;  // optional
  std::string tests;      // optional
  std::string fault_loc;  // `func:line[:col]`; empty selects by spectrum
  std::string pre = "true";
  std::string case_id;    // oracle stub key; defaults to the target's stem
  sym::SymOptions sym;
  synth::SynthLimits synth;
  oracle::OracleConfig oracle;
  int max_locations = 3;  // spectrum candidates tried without --fault-loc
  std::string output;
  bool emit_dot = false;
  bool emit_smt = false;

  /// Throws DriverError(Usage) on an invalid combination.
  void validate() const;
};

struct RepairRun {
  nlohmann::json report;
  synth::CegisResult::Status outcome = synth::CegisResult::Status::SynthesisError;
  ExitCode exit = ExitCode::SynthesisFailed;
};

/// `func:line` or `func:line:col` resolved against the program.
lang::Location resolve_location(const lang::Program& prog, const std::string& text);

/// Statements on every failing trace ranked before those also on passing ones.
std::vector<lang::Location> rank_locations(const lang::Program& prog,
                                           const std::vector<std::vector<lang::Value>>& failing,
                                           const std::vector<std::vector<lang::Value>>& passing,
                                           const sym::SymOptions& opts);

/// Line-based unified diff with three lines of context.
std::string unified_diff(const std::string& before, const std::string& after,
                         const std::string& name);

/// Runs the four stages and writes the report when `output` is set.
RepairRun run_repair(const RepairConfig& cfg);

/// Removes the timing block, for determinism comparisons.
nlohmann::json strip_timing(nlohmann::json report);

struct BenchRow {
  std::string id;
  std::string tag;
  std::string outcome;  // Fixed, SynthesisError, ..., Error
  double seconds = 0;
  std::string patch;
  std::string error;
  nlohmann::json report;
};

struct BenchSummary {
  std::vector<BenchRow> rows;
  double seconds = 0;

  std::size_t fixed() const;
  /// Fixed/unfixed counts per defect-position tag.
  std::string table() const;
  nlohmann::json to_json(bool with_timing = true) const;
};

/// Each subdirectory of `corpus` holding buggy.mc is one case. `base` supplies
/// bounds, limits and oracle settings; paths come from the case folder.
BenchSummary run_bench(const std::string& corpus, const RepairConfig& base,
                       const std::string& report_dir = "");

}  // namespace pathfix::driver
