#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "pathfix/oracle/oracle.hpp"

namespace pathfix::oracle {

// One POST, no retries.
Outcome consult_http(const OracleRequest& req, const OracleConfig& cfg) {
  if (cfg.endpoint.empty()) return {std::nullopt, "no endpoint configured"};
  static const std::regex url(R"(^(https?)://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(cfg.endpoint, m, url)) return {std::nullopt, "bad endpoint " + cfg.endpoint};
  bool tls = m[1] == "https";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (tls) return {std::nullopt, "https endpoints need a TLS-enabled build"};
#endif
  std::string host = m[2];
  int port = m[3].matched ? std::stoi(m[3]) : (tls ? 443 : 80);
  std::string path = m[4].matched ? std::string(m[4]) : "/v1/chat/completions";

  Prompt prompt = render_prompt(req, cfg.prompt_dir);
  nlohmann::json body = {
      {"model", cfg.model},
      {"temperature", cfg.temperature},
      {"messages",
       {{{"role", "system"}, {"content", prompt.system}}, {{"role", "user"}, {"content", prompt.user}}}}};

  httplib::Headers headers;
  if (const char* tok = std::getenv(cfg.token_env.c_str()); tok && *tok)
    headers.emplace("Authorization", std::string("Bearer ") + tok);

  auto call = [&](auto& cli) {
    time_t sec = cfg.timeout_ms / 1000;
    time_t usec = (cfg.timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(sec, usec);
    cli.set_read_timeout(sec, usec);
    cli.set_write_timeout(sec, usec);
    return cli.Post(path, headers, body.dump(), "application/json");
  };
  httplib::Result res;
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  if (tls) {
    httplib::SSLClient cli(host, port);
    res = call(cli);
  } else
#endif
  {
    httplib::Client cli(host, port);
    res = call(cli);
  }
  if (!res) return {std::nullopt, "request failed: " + httplib::to_string(res.error())};
  if (res->status != 200) return {std::nullopt, "HTTP status " + std::to_string(res->status)};

  auto j = nlohmann::json::parse(res->body, nullptr, false);
  std::string content;
  try {
    content = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception&) {
    return {std::nullopt, "reply is not a chat completion"};
  }
  auto payload = parse_reply(req.task, content);
  if (!payload) return {std::nullopt, std::string("reply does not match ") + format_contract(req.task)};
  return {OracleResponse{req.task, *payload, res->body, false}, ""};
}

}  // namespace pathfix::oracle
