#include "pathfix/oracle/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"

#ifndef PATHFIX_DATA_DIR
#define PATHFIX_DATA_DIR "."
#endif

namespace pathfix::oracle {

Outcome consult_http(const OracleRequest& req, const OracleConfig& cfg);

const char* to_string(Task t) {
  switch (t) {
    case Task::PrunePaths: return "PrunePaths";
    case Task::SummarizeConstraint: return "SummarizeConstraint";
    case Task::SuggestPatch: return "SuggestPatch";
  }
  return "?";
}

const char* format_contract(Task t) {
  switch (t) {
    case Task::PrunePaths: return "prune.v1";
    case Task::SummarizeConstraint: return "constraint.v1";
    case Task::SuggestPatch: return "patch.v1";
  }
  return "?";
}

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Off: return "off";
    case Backend::Stub: return "stub";
    case Backend::Http: return "http";
  }
  return "?";
}

std::optional<Backend> parse_backend(const std::string& s) {
  if (s == "off") return Backend::Off;
  if (s == "stub") return Backend::Stub;
  if (s == "http") return Backend::Http;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> body_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.rfind("```", 0) == 0 || line[0] == '#') continue;
    while (!line.empty() && line.back() == ';') line.pop_back();
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
}

Outcome unavailable(std::string why) { return {std::nullopt, std::move(why)}; }

Outcome consult_stub(const OracleRequest& req, const OracleConfig& cfg) {
  std::string dir = cfg.fixture_dir.empty() ? PATHFIX_DATA_DIR "/fixtures/oracle" : cfg.fixture_dir;
  auto text = read_file(dir + "/" + req.fixture_id + ".json");
  if (!text) return unavailable("no stub fixture for " + req.fixture_id);
  auto j = nlohmann::json::parse(*text, nullptr, false);
  std::string key = format_contract(req.task);
  if (!j.is_object() || !j.contains(key) || !j[key].is_string())
    return unavailable("stub fixture has no " + key + " reply");
  std::string raw = j[key].get<std::string>();
  auto payload = parse_reply(req.task, raw);
  if (!payload) return unavailable("stub reply does not match " + key);
  return {OracleResponse{req.task, *payload, raw, false}, ""};
}

}  // namespace

std::optional<Payload> parse_reply(Task task, const std::string& text) {
  Payload p;
  if (task == Task::PrunePaths) {
    auto b = text.find('{');
    auto e = text.rfind('}');
    if (b == std::string::npos || e == std::string::npos || e < b) return std::nullopt;
    auto j = nlohmann::json::parse(text.substr(b, e - b + 1), nullptr, false);
    if (!j.is_object() || !j.contains("prune") || !j["prune"].is_array()) return std::nullopt;
    for (const auto& item : j["prune"]) {
      if (!item.is_object() || !item.contains("id") || !item["id"].is_string()) return std::nullopt;
      PrunedPath pp{item["id"].get<std::string>(), ""};
      if (item.contains("reason") && item["reason"].is_string())
        pp.reason = item["reason"].get<std::string>();
      p.pruned.push_back(std::move(pp));
    }
    return p;
  }
  auto lines = body_lines(text);
  if (lines.empty()) return std::nullopt;
  if (task == Task::SummarizeConstraint) {
    p.conjuncts = std::move(lines);
  } else {
    if (lines.size() > 3) lines.resize(3);
    p.expressions = std::move(lines);
  }
  return p;
}

Prompt render_prompt(const OracleRequest& req, const std::string& prompt_dir) {
  std::string dir = prompt_dir.empty() ? PATHFIX_DATA_DIR "/assets/prompts" : prompt_dir;
  std::string name = format_contract(req.task);
  auto text = read_file(dir + "/" + name + ".txt");
  if (!text) throw std::runtime_error("missing prompt template " + name);
  auto s = text->find("[system]");
  auto u = text->find("[user]");
  if (s == std::string::npos || u == std::string::npos || u < s)
    throw std::runtime_error("malformed prompt template " + name);
  Prompt p{trim(text->substr(s + 8, u - s - 8)), trim(text->substr(u + 6))};
  for (auto* part : {&p.system, &p.user}) {
    replace_all(*part, "{program}", req.program_source);
    replace_all(*part, "{context}", req.context);
    replace_all(*part, "{format}", req.format_contract.empty() ? name : req.format_contract);
  }
  return p;
}

Outcome consult(const OracleRequest& req, const OracleConfig& cfg) {
  try {
    switch (cfg.backend) {
      case Backend::Off: return unavailable("oracle disabled");
      case Backend::Stub: return consult_stub(req, cfg);
      case Backend::Http: return consult_http(req, cfg);
    }
  } catch (const std::exception& e) {
    return unavailable(e.what());
  }
  return unavailable("unknown backend");
}

std::vector<Outcome> consult_all(const std::vector<OracleRequest>& reqs, const OracleConfig& cfg) {
  std::vector<Outcome> out;
  std::size_t width = static_cast<std::size_t>(std::max(cfg.parallel, 1));
  for (std::size_t i = 0; i < reqs.size(); i += width) {
    std::vector<std::future<Outcome>> batch;
    for (std::size_t k = i; k < std::min(reqs.size(), i + width); ++k)
      batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async,
                                 [&, k] { return consult(reqs[k], cfg); }));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace pathfix::oracle
