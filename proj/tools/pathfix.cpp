#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pathfix/driver/driver.hpp"

using namespace pathfix;
using driver::ExitCode;

namespace {

void bounds_options(CLI::App& app, driver::RepairConfig& cfg, std::string& backend) {
  app.add_option("--loop-bound", cfg.sym.loop_trips, "Condition tests per loop activation")
      ->check(CLI::PositiveNumber);
  app.add_option("--int-bound", cfg.sym.solver.int_bound, "Integer search range [-B, B]")
      ->check(CLI::PositiveNumber);
  app.add_option("--fuel", cfg.sym.step_fuel, "Executed statements per run")->check(CLI::PositiveNumber);
  app.add_option("--max-paths", cfg.sym.max_paths, "Symbolic paths per program")
      ->check(CLI::PositiveNumber);
  app.add_option("--synth-rounds", cfg.synth.rounds, "Synthesis rounds")->check(CLI::PositiveNumber);
  app.add_option("--synth-budget", cfg.synth.budget, "Candidates tried per round")
      ->check(CLI::PositiveNumber);
  app.add_option("--synth-depth", cfg.synth.max_depth, "Maximum candidate depth")
      ->check(CLI::PositiveNumber);
  app.add_option("--oracle", backend, "Oracle backend")
      ->check(CLI::IsMember({"off", "stub", "http"}));
  app.add_option("--oracle-fixtures", cfg.oracle.fixture_dir, "Stub reply directory");
  app.add_option("--oracle-parallel", cfg.oracle.parallel, "Oracle requests in flight")
      ->check(CLI::PositiveNumber);
  app.add_option("--oracle-timeout-ms", cfg.oracle.timeout_ms, "Oracle request timeout")
      ->check(CLI::PositiveNumber);
  app.add_option("--llm-endpoint", cfg.oracle.endpoint, "Chat-completion URL");
  app.add_option("--llm-model", cfg.oracle.model, "Model name sent to the endpoint");
  app.add_option("--llm-temperature", cfg.oracle.temperature, "Sampling temperature");
  app.add_option("--smt-backend", cfg.sym.solver.external,
                 "External SMT-LIB2 solver command used when the built-in search gives up");
}

std::string read_pre(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw driver::DriverError(ExitCode::Io, "cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  return text.empty() ? "true" : text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-guided repair for a small imperative language"};
  app.require_subcommand(1);
  driver::RepairConfig cfg;
  std::string backend = "off", pre_file, corpus, report_dir, summary_out;

  auto* repair = app.add_subcommand("repair", "Repair one program");
  repair->add_option("--target", cfg.target, "Buggy program (.mc)")->required();
  repair->add_option("--reference", cfg.reference, "Reference program (.mc)");
  repair->add_option("--tests", cfg.tests, "Tests JSON");
  repair->add_option("--fault-loc", cfg.fault_loc, "Fault location func:line[:col]");
  repair->add_option("--pre", pre_file, "File holding the pre-condition expression");
  repair->add_option("--out", cfg.output, "Report path")->required();
  repair->add_option("--case-id", cfg.case_id, "Stub oracle fixture key (default: target file stem)");
  repair->add_option("--max-locations", cfg.max_locations,
                     "Ranked locations tried when --fault-loc is absent")
      ->check(CLI::PositiveNumber);
  repair->add_flag("--emit-dot", cfg.emit_dot, "Write <out>.dot with the fault function's graph");
  repair->add_flag("--emit-smt", cfg.emit_smt, "Write <out>.smt2 with the constraints");
  bounds_options(*repair, cfg, backend);

  auto* bench = app.add_subcommand("bench", "Run every case of a corpus");
  bench->add_option("--corpus", corpus, "Corpus directory")->required();
  bench->add_option("--reports", report_dir, "Directory for per-case reports");
  bench->add_option("--out", summary_out, "Summary JSON path");
  bounds_options(*bench, cfg, backend);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    cfg.oracle.backend = *oracle::parse_backend(backend);
    if (*repair) {
      if (!pre_file.empty()) cfg.pre = read_pre(pre_file);
      auto run = driver::run_repair(cfg);
      std::cout << run.report["outcome"].get<std::string>();
      if (run.report["patch"].is_object())
        std::cout << ": " << run.report["patch"]["summary"].get<std::string>();
      std::cout << "\n";
      if (run.report["outcome"] == "NothingToRepair") std::cerr << "warning: no fault paths\n";
      return static_cast<int>(run.exit);
    }
    auto summary = driver::run_bench(corpus, cfg, report_dir);
    std::cout << summary.table();
    for (const auto& r : summary.rows)
      if (r.outcome == "Error") std::cerr << r.id << ": " << r.error << "\n";
    if (!summary_out.empty()) {
      std::ofstream out(summary_out);
      if (!out) throw driver::DriverError(ExitCode::Io, "cannot write " + summary_out);
      out << summary.to_json().dump(2) << "\n";
    }
    return 0;
  } catch (const driver::DriverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Internal);
  }
}
