#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pathfix/oracle/oracle.hpp"
#include "support.hpp"

using namespace pathfix::oracle;

namespace {

OracleConfig stub() {
  OracleConfig c;
  c.backend = Backend::Stub;
  c.fixture_dir = pathfix::testing::source_path("fixtures/oracle");
  return c;
}

OracleRequest req(Task t, const std::string& id = "bin_search") {
  return {t, "int f() { return 0; }", "context", format_contract(t), id};
}

// Serves one canned chat completion on a free local port.
struct FakeEndpoint {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::string last_body;
  std::string last_auth;

  explicit FakeEndpoint(std::string reply, int status = 200) {
    server.Post("/v1/chat/completions", [this, reply, status](const httplib::Request& rq, httplib::Response& rs) {
      last_body = rq.body;
      last_auth = rq.get_header_value("Authorization");
      nlohmann::json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", reply}}}}}}};
      rs.status = status;
      rs.set_content(j.dump(), "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  ~FakeEndpoint() {
    server.stop();
    thread.join();
  }
  OracleConfig config() const {
    OracleConfig c;
    c.backend = Backend::Http;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    c.timeout_ms = 2000;
    return c;
  }
};

}  // namespace

TEST(ParseReply, PruneJson) {
  auto p = parse_reply(Task::PrunePaths, "```json\n{\"prune\": [{\"id\": \"EP2\", \"reason\": \"x\"}]}\n```");
  ASSERT_TRUE(p);
  ASSERT_EQ(p->pruned.size(), 1u);
  EXPECT_EQ(p->pruned[0].id, "EP2");
  EXPECT_TRUE(parse_reply(Task::PrunePaths, "{\"prune\": []}"));
}

TEST(ParseReply, RejectsMalformed) {
  EXPECT_FALSE(parse_reply(Task::PrunePaths, "EP2 is infeasible"));
  EXPECT_FALSE(parse_reply(Task::PrunePaths, "{\"prune\": [{\"reason\": \"no id\"}]}"));
  EXPECT_FALSE(parse_reply(Task::SuggestPatch, "```\n```"));
  EXPECT_FALSE(parse_reply(Task::SummarizeConstraint, "  \n"));
}

TEST(ParseReply, PatchLinesCappedAndCleaned) {
  auto p = parse_reply(Task::SuggestPatch, "a < b;\n\nb < a\nc\nd");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->expressions, (std::vector<std::string>{"a < b", "b < a", "c"}));
}

TEST(Stub, PruneMirrorsSolver) {
  auto r = consult(req(Task::PrunePaths), stub());
  ASSERT_TRUE(r.response) << r.error;
  EXPECT_FALSE(r.response->trusted);
  ASSERT_EQ(r.response->payload.pruned.size(), 2u);
  EXPECT_EQ(r.response->payload.pruned[0].id, "EP2");
  EXPECT_EQ(r.response->payload.pruned[1].id, "EP3");
  EXPECT_NE(r.response->payload.pruned[0].reason.find("ArrayBounds"), std::string::npos);
  EXPECT_NE(r.response->payload.pruned[1].reason.find("ContradictsPre"), std::string::npos);
}

TEST(Stub, SuggestsGroundTruth) {
  auto r = consult(req(Task::SuggestPatch), stub());
  ASSERT_TRUE(r.response);
  EXPECT_EQ(r.response->payload.expressions, (std::vector<std::string>{"L <= R"}));
}

TEST(Stub, Deterministic) {
  auto a = consult(req(Task::SummarizeConstraint), stub());
  auto b = consult(req(Task::SummarizeConstraint), stub());
  ASSERT_TRUE(a.response && b.response);
  EXPECT_EQ(a.response->raw, b.response->raw);
}

TEST(Stub, MissingOrMalformedIsUnavailable) {
  EXPECT_FALSE(consult(req(Task::SuggestPatch, "no_such_case"), stub()).response);
  EXPECT_FALSE(consult(req(Task::PrunePaths, "malformed"), stub()).response);
  EXPECT_FALSE(consult(req(Task::SummarizeConstraint, "malformed"), stub()).response);
}

TEST(Off, AlwaysUnavailable) {
  EXPECT_FALSE(consult(req(Task::SuggestPatch), OracleConfig{}).response);
}

TEST(Prompt, RendersShippedTemplates) {
  for (auto t : {Task::PrunePaths, Task::SummarizeConstraint, Task::SuggestPatch}) {
    auto p = render_prompt(req(t));
    EXPECT_FALSE(p.system.empty());
    EXPECT_NE(p.user.find("int f() { return 0; }"), std::string::npos);
    EXPECT_NE(p.user.find("context"), std::string::npos);
    EXPECT_EQ(p.user.find("{program}"), std::string::npos);
  }
}

TEST(Http, UnreachableEndpointTimesOut) {
  OracleConfig c;
  c.backend = Backend::Http;
  c.endpoint = "http://10.255.255.1:9/v1/chat/completions";
  c.timeout_ms = 300;
  auto t0 = std::chrono::steady_clock::now();
  auto r = consult(req(Task::SuggestPatch), c);
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_FALSE(r.response);
  EXPECT_LT(s, 3.0);
}

TEST(Http, MissingEndpointIsUnavailable) {
  OracleConfig c;
  c.backend = Backend::Http;
  EXPECT_FALSE(consult(req(Task::SuggestPatch), c).response);
}

TEST(Http, SendsChatRequestAndParsesReply) {
  FakeEndpoint ep("L <= R\n");
  setenv("PATHFIX_LLM_TOKEN", "secret", 1);
  auto cfg = ep.config();
  cfg.temperature = 0.5;
  auto r = consult(req(Task::SuggestPatch), cfg);
  unsetenv("PATHFIX_LLM_TOKEN");
  ASSERT_TRUE(r.response) << r.error;
  EXPECT_EQ(r.response->payload.expressions, (std::vector<std::string>{"L <= R"}));
  auto body = nlohmann::json::parse(ep.last_body);
  EXPECT_EQ(body["model"], "gpt-4o");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.5);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(ep.last_auth, "Bearer secret");
}

TEST(Http, MalformedReplyIsUnavailable) {
  FakeEndpoint ep("I think EP2 should go.");
  auto r = consult(req(Task::PrunePaths), ep.config());
  EXPECT_FALSE(r.response);
}

TEST(Http, ErrorStatusIsUnavailable) {
  FakeEndpoint ep("L <= R", 500);
  EXPECT_FALSE(consult(req(Task::SuggestPatch), ep.config()).response);
}

TEST(ConsultAll, KeepsRequestOrder) {
  auto cfg = stub();
  cfg.parallel = 2;
  std::vector<OracleRequest> rs = {req(Task::SuggestPatch), req(Task::PrunePaths, "missing"),
                                   req(Task::PrunePaths)};
  auto out = consult_all(rs, cfg);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].response && out[0].response->task == Task::SuggestPatch);
  EXPECT_FALSE(out[1].response);
  EXPECT_TRUE(out[2].response && out[2].response->task == Task::PrunePaths);
}
