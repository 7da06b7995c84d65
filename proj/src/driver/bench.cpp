#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "pathfix/driver/driver.hpp"

namespace pathfix::driver {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t BenchSummary::fixed() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const BenchRow& r) { return r.outcome == "Fixed"; }));
}

std::string BenchSummary::table() const {
  std::map<std::string, std::pair<int, int>> by_tag;
  std::map<std::string, double> secs;
  for (const auto& r : rows) {
    auto& c = by_tag[r.tag];
    (r.outcome == "Fixed" ? c.first : c.second)++;
    secs[r.tag] += r.seconds;
  }
  std::ostringstream o;
  o << std::left << std::setw(28) << "position" << std::right << std::setw(7) << "fixed"
    << std::setw(9) << "unfixed" << std::setw(10) << "seconds" << "\n";
  for (const auto& [tag, c] : by_tag)
    o << std::left << std::setw(28) << tag << std::right << std::setw(7) << c.first << std::setw(9)
      << c.second << std::setw(10) << std::fixed << std::setprecision(2) << secs[tag] << "\n";
  o << std::left << std::setw(28) << "total" << std::right << std::setw(7) << fixed() << std::setw(9)
    << rows.size() - fixed() << std::setw(10) << std::fixed << std::setprecision(2) << seconds << "\n";
  return o.str();
}

json BenchSummary::to_json(bool with_timing) const {
  json cases = json::array();
  for (const auto& r : rows) {
    json j = {{"id", r.id}, {"tag", r.tag}, {"outcome", r.outcome}, {"patch", r.patch}};
    if (!r.error.empty()) j["error"] = r.error;
    if (with_timing) j["timing"] = {{"seconds", r.seconds}};
    cases.push_back(j);
  }
  json out = {{"schema", 1}, {"cases", cases}, {"fixed", fixed()}, {"total", rows.size()}};
  if (with_timing) out["timing"] = {{"seconds", seconds}};
  return out;
}

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DriverError(ExitCode::Io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

BenchRow run_case(const fs::path& dir, const RepairConfig& base, const std::string& report_dir) {
  BenchRow row;
  row.id = dir.filename().string();
  row.tag = "unknown";
  auto t0 = std::chrono::steady_clock::now();
  try {
    RepairConfig cfg = base;
    cfg.target = (dir / "buggy.mc").string();
    cfg.reference = fs::exists(dir / "reference.mc") ? (dir / "reference.mc").string() : "";
    cfg.tests = fs::exists(dir / "tests.json") ? (dir / "tests.json").string() : "";
    cfg.pre = fs::exists(dir / "pre.txt") ? trim(slurp(dir / "pre.txt")) : "true";
    if (cfg.pre.empty()) cfg.pre = "true";
    cfg.case_id = row.id;
    if (fs::exists(dir / "meta.json")) {
      json meta = json::parse(slurp(dir / "meta.json"), nullptr, false);
      if (meta.is_discarded()) throw DriverError(ExitCode::Parse, "meta.json does not parse");
      row.id = meta.value("id", row.id);
      cfg.case_id = row.id;
      row.tag = meta.value("tag", row.tag);
      if (cfg.fault_loc.empty()) cfg.fault_loc = meta.value("fault", std::string());
    }
    cfg.output = report_dir.empty() ? "" : (fs::path(report_dir) / (row.id + ".json")).string();
    RepairRun run = run_repair(cfg);
    row.outcome = run.report["outcome"].get<std::string>();
    if (run.report["patch"].is_object()) row.patch = run.report["patch"]["expression"].get<std::string>();
    row.report = std::move(run.report);
  } catch (const std::exception& e) {
    row.outcome = "Error";
    row.error = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

BenchSummary run_bench(const std::string& corpus, const RepairConfig& base,
                       const std::string& report_dir) {
  if (!fs::is_directory(corpus)) throw DriverError(ExitCode::Io, "no corpus directory " + corpus);
  if (!report_dir.empty()) fs::create_directories(report_dir);
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(corpus))
    if (e.is_directory() && fs::exists(e.path() / "buggy.mc")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  BenchSummary s;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& d : dirs) s.rows.push_back(run_case(d, base, report_dir));
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace pathfix::driver
