#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hooks.hpp"
#include "pathfix/cfg/cfg.hpp"
#include "pathfix/driver/report.hpp"
#include "pathfix/lang/parser.hpp"
#include "pathfix/lang/printer.hpp"

namespace pathfix::driver {

namespace {

using nlohmann::json;
using Status = synth::CegisResult::Status;
using Clock = std::chrono::steady_clock;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DriverError(ExitCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw DriverError(ExitCode::Io, "cannot write " + path);
}

lang::Program parse(const std::string& path) {
  std::string src = read_file(path);
  try {
    return lang::parse_program(src);
  } catch (const lang::LangError& e) {
    throw DriverError(ExitCode::Parse, path + ":" + std::to_string(e.span().line) + ":" +
                                           std::to_string(e.span().col) + ": " + e.what());
  }
}

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

ExitCode exit_for(Status s) {
  switch (s) {
    case Status::Fixed:
    case Status::NothingToRepair: return ExitCode::Ok;
    case Status::ConstraintError: return ExitCode::ConstraintFailed;
    case Status::SynthesisError: return ExitCode::SynthesisFailed;
  }
  return ExitCode::Internal;
}

struct Attempt {
  lang::Location loc;
  std::vector<specinfer::FaultSpec> specs;
  synth::CegisResult result;
  json oracle = json::array();
  bool hinted = false;
  bool retried = false;
  double spec_ms = 0, synth_ms = 0;
};

class Pipeline {
 public:
  explicit Pipeline(const RepairConfig& cfg) : cfg_(cfg) {}
  RepairRun run();

 private:
  const RepairConfig& cfg_;
  lang::Program target_;
  std::optional<lang::Program> reference_;
  std::vector<equiv::TestCase> tests_;
  lang::ExprPtr pre_;
  std::string source_;
  equiv::EquivResult eq_;
  std::vector<equiv::PathTriplet> faults_;
  std::vector<equiv::TestCase> bank_;
  json timing_ = json::object();

  void load();
  std::vector<lang::Location> locations();
  Attempt attempt(const lang::Location& loc, const Hints* hints);
  Attempt repair_at(const lang::Location& loc);
  std::vector<specinfer::FaultSpec> infer(const lang::Location& loc, const Hints* hints);
};

void Pipeline::load() {
  source_ = read_file(cfg_.target);
  target_ = parse(cfg_.target);
  if (!cfg_.reference.empty()) {
    reference_ = parse(cfg_.reference);
    const auto& a = target_.entry_function();
    const auto& b = reference_->entry_function();
    bool same = a.params.size() == b.params.size() && a.ret_type == b.ret_type;
    for (std::size_t i = 0; same && i < a.params.size(); ++i) same = a.params[i].type == b.params[i].type;
    if (!same) throw DriverError(ExitCode::Parse, "target and reference signatures differ");
  }
  try {
    pre_ = sym::parse_pre(target_, cfg_.pre);
  } catch (const std::exception& e) {
    throw DriverError(ExitCode::Parse, std::string("pre-condition: ") + e.what());
  }
  if (!cfg_.tests.empty()) {
    try {
      tests_ = equiv::parse_tests(read_file(cfg_.tests), target_.entry_function());
    } catch (const equiv::EquivError& e) {
      throw DriverError(ExitCode::Parse, cfg_.tests + ": " + e.what());
    }
  }
}

std::vector<lang::Location> Pipeline::locations() {
  if (!cfg_.fault_loc.empty()) return {resolve_location(target_, cfg_.fault_loc)};
  std::vector<std::vector<lang::Value>> failing, passing;
  for (const auto& t : faults_) failing.push_back(t.witness_inputs);
  for (const auto& t : bank_) passing.push_back(t.inputs);
  auto ranked = rank_locations(target_, failing, passing, cfg_.sym);
  if (ranked.size() > static_cast<std::size_t>(cfg_.max_locations))
    ranked.resize(static_cast<std::size_t>(cfg_.max_locations));
  return ranked;
}

std::vector<specinfer::FaultSpec> Pipeline::infer(const lang::Location& loc, const Hints* hints) {
  specinfer::SpecOptions opts;
  std::set<std::string> prune;
  if (hints) {
    opts.invariants = hints->invariants;
    prune = hints->prune;
  }
  std::vector<specinfer::FaultSpec> out;
  int ep = 1;
  for (const auto& t : faults_) {
    out.push_back(specinfer::infer(target_, loc, t, eq_.env, opts, prune, ep));
    ep += static_cast<int>(out.back().constraints.size());
    for (const auto& l : out.back().log) ep += l.reason.rfind("Unsupported", 0) == 0;
  }
  return out;
}

Attempt Pipeline::attempt(const lang::Location& loc, const Hints* hints) {
  Attempt a;
  a.loc = loc;
  auto t0 = Clock::now();
  try {
    a.specs = infer(loc, hints);
  } catch (const specinfer::SpecError& e) {
    a.spec_ms = ms_since(t0);
    a.result.status = Status::ConstraintError;
    a.result.reason = e.what();
    return a;
  }
  a.spec_ms = ms_since(t0);
  synth::CegisInput in;
  in.program = &target_;
  in.reference = reference_ ? &*reference_ : nullptr;
  in.pre = pre_;
  in.fault = loc;
  in.specs = a.specs;
  in.bank = bank_;
  in.env = eq_.env;
  in.verify.equiv.sym = cfg_.sym;
  if (hints) in.suggestions = hints->suggestions;
  auto t1 = Clock::now();
  a.result = synth::cegis_loop(in, cfg_.synth);
  a.synth_ms = ms_since(t1);
  a.hinted = hints && hints->any();
  return a;
}

Attempt Pipeline::repair_at(const lang::Location& loc) {
  if (cfg_.oracle.backend == oracle::Backend::Off) return attempt(loc, nullptr);
  // Hints reference the ids of an unhinted inference.
  std::vector<specinfer::FaultSpec> base;
  try {
    base = infer(loc, nullptr);
  } catch (const specinfer::SpecError&) {
    return attempt(loc, nullptr);
  }
  std::string id = cfg_.case_id.empty() ? std::filesystem::path(cfg_.target).stem().string() : cfg_.case_id;
  Hints h = gather_hints(cfg_.oracle, id, source_, target_, loc, base);
  Attempt a = attempt(loc, h.any() ? &h : nullptr);
  a.oracle = h.log;
  if (a.hinted && a.result.status != Status::Fixed) {
    Attempt b = attempt(loc, nullptr);
    b.oracle = h.log;
    b.retried = true;
    return b;
  }
  return a;
}

RepairRun Pipeline::run() {
  auto start = Clock::now();
  load();
  timing_["parse_ms"] = ms_since(start);

  equiv::EquivOptions eo;
  eo.sym = cfg_.sym;
  auto t = Clock::now();
  eq_ = reference_ ? equiv::check_equivalence(target_, *reference_, pre_, eo)
                   : equiv::faults_from_tests(target_, tests_, pre_, eo);
  timing_["fault_paths_ms"] = ms_since(t);
  for (const auto& tr : eq_.triplets)
    if (tr.fault) faults_.push_back(tr);
  bank_ = verify::benign_bank(eq_, tests_);

  json report = {{"schema", 1}, {"tool", "pathfix"}};
  report["inputs"] = {{"target", cfg_.target}, {"reference", cfg_.reference},
                      {"tests", cfg_.tests}, {"pre", cfg_.pre}, {"fault_location", cfg_.fault_loc}};
  report["settings"] = {{"loop_bound", cfg_.sym.loop_trips}, {"int_bound", cfg_.sym.solver.int_bound},
                        {"fuel", cfg_.sym.step_fuel}, {"max_paths", cfg_.sym.max_paths},
                        {"synth_rounds", cfg_.synth.rounds}, {"synth_budget", cfg_.synth.budget},
                        {"synth_depth", cfg_.synth.max_depth},
                        {"oracle", oracle::to_string(cfg_.oracle.backend)}};
  json triplets = json::array();
  for (const auto& tr : eq_.triplets) triplets.push_back(to_json(tr));
  report["triplets"] = triplets;
  report["triplet_summary"] = {{"count", eq_.triplets.size()}, {"faults", faults_.size()},
                               {"truncated", eq_.truncated}};
  json warnings = eq_.warnings;

  RepairRun run;
  Attempt best;
  std::vector<lang::Location> locs;
  if (faults_.empty()) {
    best.result.status = Status::NothingToRepair;
    best.result.reason = "no fault paths";
    warnings.push_back("no fault paths: nothing to repair");
  } else {
    locs = locations();
    if (locs.empty()) {
      best.result.status = Status::ConstraintError;
      best.result.reason = "no statement lies on every failing trace";
    }
    for (std::size_t i = 0; i < locs.size(); ++i) {
      Attempt a = repair_at(locs[i]);
      bool fixed = a.result.status == Status::Fixed;
      if (i == 0 || fixed) best = std::move(a);
      if (fixed) break;
    }
  }

  json tried = json::array();
  for (const auto& l : locs) tried.push_back(l.str());
  report["locations_tried"] = tried;
  report["fault_location"] = best.specs.empty() ? json(nullptr) : json(best.loc.str());

  json paths = json::array(), constraints = json::array();
  std::optional<cfg::Cfg> g;
  if (const lang::Function* fn = best.specs.empty() ? nullptr : target_.find(best.loc.function)) {
    g = cfg::build_cfg(*fn);
    for (const auto& s : best.specs) {
      json p = to_json(s, *g, eq_.env, constraints);
      paths.insert(paths.end(), p.begin(), p.end());
    }
  }
  report["candidate_paths"] = paths;
  report["constraints"] = constraints;
  report["synthesis"] = to_json(best.result);
  report["oracle"] = {{"backend", oracle::to_string(cfg_.oracle.backend)},
                      {"requests", best.oracle},
                      {"hints_used", best.hinted && !best.retried},
                      {"retried_without_hints", best.retried}};
  timing_["spec_inference_ms"] = best.spec_ms;
  timing_["synthesis_ms"] = best.synth_ms;

  report["patch"] = nullptr;
  report["verification"] = nullptr;
  if (best.result.status == Status::Fixed && best.result.patch) {
    report["patch"] = to_json(*best.result.patch, target_);
    auto tv = Clock::now();
    verify::VerifyOptions vo;
    vo.equiv.sym = cfg_.sym;
    auto rep = verify::verify_patch(best.result.patch->apply(target_), reference_ ? &*reference_ : nullptr,
                                    faults_, bank_, pre_, vo, best.result.patch->str());
    timing_["verification_ms"] = ms_since(tv);
    report["verification"] = to_json(rep);
    if (!rep.accepted) {
      best.result.status = Status::SynthesisError;
      best.result.reason = "final verification rejected the patch: " + rep.reason;
    }
  }
  report["warnings"] = warnings;
  run.outcome = best.result.status;
  run.exit = exit_for(run.outcome);
  report["outcome"] = synth::to_string(run.outcome);
  report["reason"] = best.result.reason;
  report["exit_code"] = static_cast<int>(run.exit);

  json artifacts = json::array();
  if (!cfg_.output.empty() && g) {
    if (cfg_.emit_dot) {
      write_file(cfg_.output + ".dot", cfg::to_dot(*g, cfg::line_graph(*g)));
      artifacts.push_back(cfg_.output + ".dot");
    }
    if (cfg_.emit_smt) {
      std::string smt;
      for (const auto& c : constraints) smt += "; " + c["id"].get<std::string>() + "\n" + c["smtlib"].get<std::string>() + "\n";
      write_file(cfg_.output + ".smt2", smt);
      artifacts.push_back(cfg_.output + ".smt2");
    }
  }
  report["artifacts"] = artifacts;
  timing_["total_ms"] = ms_since(start);
  report["timing"] = timing_;
  run.report = std::move(report);
  if (!cfg_.output.empty()) write_file(cfg_.output, run.report.dump(2) + "\n");
  return run;
}

}  // namespace

RepairRun run_repair(const RepairConfig& cfg) {
  cfg.validate();
  return Pipeline(cfg).run();
}

}  // namespace pathfix::driver
