#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "pathfix/driver/driver.hpp"
#include "pathfix/equiv/equiv.hpp"
#include "pathfix/lang/interpreter.hpp"

namespace pathfix::driver {

void RepairConfig::validate() const {
  if (target.empty()) throw DriverError(ExitCode::Usage, "--target is required");
  if (reference.empty() && tests.empty())
    throw DriverError(ExitCode::Usage, "one of --reference or --tests is required");
  if (sym.loop_trips < 1 || sym.call_depth < 1 || sym.step_fuel < 1 || sym.max_paths < 1 ||
      sym.solver.int_bound < 1)
    throw DriverError(ExitCode::Usage, "bounds must be at least 1");
  if (synth.rounds < 1 || synth.budget < 1 || synth.max_depth < 1)
    throw DriverError(ExitCode::Usage, "synthesis limits must be at least 1");
  if (oracle.parallel < 1 || oracle.timeout_ms < 1)
    throw DriverError(ExitCode::Usage, "oracle settings must be at least 1");
  if (oracle.backend == oracle::Backend::Http && oracle.endpoint.empty())
    throw DriverError(ExitCode::Usage, "--oracle http needs --llm-endpoint");
}

lang::Location resolve_location(const lang::Program& prog, const std::string& text) {
  auto c1 = text.find(':');
  if (c1 == std::string::npos) throw DriverError(ExitCode::Usage, "fault location must be func:line[:col]");
  std::string fn_name = text.substr(0, c1);
  int line = 0, col = 0;
  try {
    auto c2 = text.find(':', c1 + 1);
    line = std::stoi(text.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    if (c2 != std::string::npos) col = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw DriverError(ExitCode::Usage, "fault location must be func:line[:col]");
  }
  const lang::Function* fn = prog.find(fn_name);
  if (!fn) throw DriverError(ExitCode::Usage, "no function " + fn_name);
  std::optional<lang::Location> hit;
  lang::for_each_stmt(fn->body, [&](const lang::Stmt& s) {
    if (hit || s.loc.span.line != line) return;
    if (col == 0 || s.loc.span.col == col) hit = s.loc;
  });
  if (!hit) throw DriverError(ExitCode::Usage, "no statement at " + text);
  return *hit;
}

std::vector<lang::Location> rank_locations(const lang::Program& prog,
                                           const std::vector<std::vector<lang::Value>>& failing,
                                           const std::vector<std::vector<lang::Value>>& passing,
                                           const sym::SymOptions& opts) {
  lang::InterpOptions io;
  io.trace = true;
  io.loop_bound = opts.loop_trips;
  io.call_bound = opts.call_depth;
  auto cover = [&](const std::vector<lang::Value>& in) {
    std::set<lang::Location> seen;
    for (const auto& t : lang::interpret(prog, in, opts.step_fuel, io).trace) seen.insert(t.loc);
    return seen;
  };
  std::map<lang::Location, int> fail, pass;
  for (const auto& in : failing)
    for (const auto& l : cover(in)) ++fail[l];
  for (const auto& in : passing)
    for (const auto& l : cover(in)) ++pass[l];

  struct Ranked {
    lang::Location loc;
    int order;
    int pass;
    int kind;
  };
  auto kind_rank = [](lang::StmtKind k) {
    if (k == lang::StmtKind::If || k == lang::StmtKind::While) return 0;
    return k == lang::StmtKind::Return ? 2 : 1;
  };
  std::vector<Ranked> rs;
  int order = 0;
  for (const auto& fn : prog.functions)
    lang::for_each_stmt(fn.body, [&](const lang::Stmt& s) {
      ++order;
      if (s.kind == lang::StmtKind::Break || s.kind == lang::StmtKind::Continue || !s.expr) return;
      auto it = fail.find(s.loc);
      if (it == fail.end() || it->second < static_cast<int>(failing.size())) return;
      rs.push_back({s.loc, order, pass.count(s.loc) ? pass[s.loc] : 0, kind_rank(s.kind)});
    });
  // Failing-only statements, then conditions, then fewest passing hits.
  std::stable_sort(rs.begin(), rs.end(), [](const Ranked& a, const Ranked& b) {
    return std::make_tuple(a.pass > 0, a.kind, a.pass, a.order) <
           std::make_tuple(b.pass > 0, b.kind, b.pass, b.order);
  });
  std::vector<lang::Location> out;
  for (const auto& r : rs) out.push_back(r.loc);
  return out;
}

std::string unified_diff(const std::string& before, const std::string& after,
                         const std::string& name) {
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
  };
  auto a = split(before), b = split(after);
  std::size_t pre = 0;
  while (pre < a.size() && pre < b.size() && a[pre] == b[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < a.size() - pre && suf < b.size() - pre &&
         a[a.size() - 1 - suf] == b[b.size() - 1 - suf])
    ++suf;
  if (pre == a.size() && pre == b.size()) return "";
  std::size_t lo = pre >= 3 ? pre - 3 : 0;
  std::size_t a_end = std::min(a.size(), a.size() - suf + 3);
  std::size_t b_end = std::min(b.size(), b.size() - suf + 3);
  std::ostringstream out;
  out << "--- a/" << name << "\n+++ b/" << name << "\n";
  out << "@@ -" << lo + 1 << "," << a_end - lo << " +" << lo + 1 << "," << b_end - lo << " @@\n";
  for (std::size_t i = lo; i < pre; ++i) out << " " << a[i] << "\n";
  for (std::size_t i = pre; i < a.size() - suf; ++i) out << "-" << a[i] << "\n";
  for (std::size_t i = pre; i < b.size() - suf; ++i) out << "+" << b[i] << "\n";
  for (std::size_t i = a.size() - suf; i < a_end; ++i) out << " " << a[i] << "\n";
  return out.str();
}

nlohmann::json strip_timing(nlohmann::json report) {
  if (report.is_object()) {
    report.erase("timing");
    for (auto& [k, v] : report.items()) v = strip_timing(v);
  } else if (report.is_array()) {
    for (auto& v : report) v = strip_timing(v);
  }
  return report;
}

}  // namespace pathfix::driver
