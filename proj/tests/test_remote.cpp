#include <doctest.h>

#include <atomic>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cpc/error.hpp"
#include "cpc/remote.hpp"

using namespace cpc;
using nlohmann::json;

namespace {

// In-process server speaking the wire format, bound to an ephemeral port.
class WireServer {
 public:
  WireServer() {
    server_.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body);
      json vectors = json::array();
      for (const auto& token : body.at("tokens")) {
        const double h = static_cast<double>(token.get<std::string>().size());
        vectors.push_back({h, 1.0});
      }
      res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
    });
    server_.Post("/generate", [](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body);
      res.set_content(
          json{{"text", "echo: " + body.at("prompt").get<std::string>()}}.dump(),
          "application/json");
    });
    server_.Post("/flaky", [this](const httplib::Request&, httplib::Response& res) {
      if (flaky_hits_++ == 0) {
        res.status = 429;
        return;
      }
      res.set_content(json{{"text", "recovered"}}.dump(), "application/json");
    });
    server_.Post("/always429", [](const httplib::Request&, httplib::Response& res) {
      res.status = 429;
    });
    server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    });
    server_.Post("/short", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"vectors", json::array({json::array({1.0, 2.0})})}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~WireServer() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> flaky_hits_{0};
};

}  // namespace

TEST_CASE("remote embedder speaks the wire format") {
  WireServer server;
  const RemoteEmbedder embedder({server.url("/embed"), "test-key"});
  const std::vector<std::string> tokens = {"one", "three"};
  const TokenEmbeddings out = embedder.embed_document(tokens);
  REQUIRE(out.size() == 2);
  CHECK(out.dim == 2);
  CHECK(out.vector(0)[0] == doctest::Approx(3.0));
  CHECK(out.vector(1)[0] == doctest::Approx(5.0));
}

TEST_CASE("remote embedder flags mismatched vector counts") {
  WireServer server;
  const RemoteEmbedder embedder({server.url("/short"), ""});
  const std::vector<std::string> tokens = {"a", "b", "c"};
  try {
    (void)embedder.embed_document(tokens);
    FAIL("expected transport error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::transport);
  }
}

TEST_CASE("remote generator round-trips and surfaces failures") {
  WireServer server;
  RemoteGenerator generator({server.url("/generate"), ""});
  CHECK(generator.generate("ping") == "echo: ping");

  RemoteGenerator broken({server.url("/broken"), ""});
  try {
    (void)broken.generate("ping");
    FAIL("expected transport error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::transport);
    CHECK_FALSE(e.retryable());
  }

  RemoteGenerator unreachable({"http://127.0.0.1:1/generate", ""});
  CHECK_THROWS_AS((void)unreachable.generate("ping"), Error);
}

TEST_CASE("rate limits retry, then surface distinctly") {
  WireServer server;
  RemoteGenerator flaky({server.url("/flaky"), "", /*retries=*/2});
  CHECK(flaky.generate("once") == "recovered");

  RemoteGenerator exhausted({server.url("/always429"), "", /*retries=*/1});
  try {
    (void)exhausted.generate("never");
    FAIL("expected rate limit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::rate_limit);
    CHECK(e.retryable());
  }
}

TEST_CASE("environment variables configure endpoints") {
  ::setenv("CPC_EMBED_URL", "http://example.test/embed", 1);
  ::setenv("CPC_API_KEY", "secret", 1);
  const RemoteConfig config = remote_embedder_config_from_env();
  CHECK(config.url == "http://example.test/embed");
  CHECK(config.api_key == "secret");
  ::unsetenv("CPC_EMBED_URL");
  ::unsetenv("CPC_API_KEY");
}
