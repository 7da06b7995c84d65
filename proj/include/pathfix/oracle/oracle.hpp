#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pathfix::oracle {

enum class Task { PrunePaths, SummarizeConstraint, SuggestPatch };
const char* to_string(Task t);
/// Response schema id for a task: `prune.v1`, `constraint.v1`, `patch.v1`.
const char* format_contract(Task t);

struct OracleRequest {
  Task task = Task::SuggestPatch;
  std::string program_source;
  std::string context;  // self-contained task payload
  std::string format_contract;
  std::string fixture_id;  // stub lookup key
};

struct PrunedPath {
  std::string id;
  std::string reason;
};

struct Payload {
  std::vector<PrunedPath> pruned;        // prune.v1
  std::vector<std::string> conjuncts;    // constraint.v1, term text
  std::vector<std::string> expressions;  // patch.v1, mini-language text
};

struct OracleResponse {
  Task task = Task::SuggestPatch;
  Payload payload;
  std::string raw;
  bool trusted = false;
};

enum class Backend { Off, Stub, Http };
const char* to_string(Backend b);
std::optional<Backend> parse_backend(const std::string& s);

struct OracleConfig {
  Backend backend = Backend::Off;
  std::string fixture_dir;  // stub: <dir>/<fixture_id>.json
  std::string endpoint;     // http://host[:port]/path
  std::string model = "gpt-4o";
  double temperature = 1.0;
  int timeout_ms = 10000;
  std::string token_env = "PATHFIX_LLM_TOKEN";
  std::string prompt_dir;  // templates; empty selects the shipped ones
  int parallel = 1;
};

/// Parses a reply body against the task's schema; nullopt when it does not
/// conform or carries nothing.
std::optional<Payload> parse_reply(Task task, const std::string& text);

struct Prompt {
  std::string system;
  std::string user;
};

/// Fills the task's template with the request fields.
Prompt render_prompt(const OracleRequest& req, const std::string& prompt_dir = "");

struct Outcome {
  std::optional<OracleResponse> response;  // empty means Unavailable
  std::string error;
};

Outcome consult(const OracleRequest& req, const OracleConfig& cfg);

/// At most `cfg.parallel` requests in flight; results in request order.
std::vector<Outcome> consult_all(const std::vector<OracleRequest>& reqs, const OracleConfig& cfg);

}  // namespace pathfix::oracle
