#include "cpc/remote.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cpc/error.hpp"

namespace cpc {

namespace {

using nlohmann::json;

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with /
};

SplitUrl split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::invalid_argument, "endpoint url needs a scheme: " + url);
  }
  const std::size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, "/"};
  return {url.substr(0, path), url.substr(path)};
}

json post_json(const RemoteConfig& config, const json& request) {
  if (config.url.empty()) {
    throw Error(ErrorCode::invalid_argument, "remote endpoint url is not configured");
  }
  const SplitUrl url = split_url(config.url);
  const std::string body = request.dump();

  for (std::size_t attempt = 0;; ++attempt) {
    httplib::Client client(url.base);
    client.set_connection_timeout(static_cast<time_t>(config.timeout_seconds));
    client.set_read_timeout(static_cast<time_t>(config.timeout_seconds));
    httplib::Headers headers;
    if (!config.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config.api_key);
    }
    const httplib::Result result = client.Post(url.path, headers, body, "application/json");

    if (!result) {
      throw Error(ErrorCode::transport, "request to " + config.url + " failed: " +
                                            httplib::to_string(result.error()));
    }
    if (result->status == 429) {
      if (attempt < config.retries) continue;
      throw Error(ErrorCode::rate_limit, "rate limited by " + config.url);
    }
    if (result->status != 200) {
      throw Error(ErrorCode::transport,
                  config.url + " returned status " + std::to_string(result->status));
    }
    json response = json::parse(result->body, nullptr, false);
    if (response.is_discarded()) {
      throw Error(ErrorCode::transport, config.url + " returned invalid JSON");
    }
    return response;
  }
}

}  // namespace

RemoteConfig remote_embedder_config_from_env() {
  return {env_or_empty("CPC_EMBED_URL"), env_or_empty("CPC_API_KEY")};
}

RemoteConfig remote_generator_config_from_env() {
  return {env_or_empty("CPC_LLM_URL"), env_or_empty("CPC_API_KEY")};
}

RemoteEmbedder::RemoteEmbedder(RemoteConfig config, std::size_t max_tokens)
    : config_(std::move(config)), max_tokens_(max_tokens) {}

TokenEmbeddings RemoteEmbedder::embed_document(std::span<const std::string> tokens) const {
  if (tokens.empty()) {
    throw Error(ErrorCode::empty_context, "embed_document needs at least one token");
  }
  if (tokens.size() > max_tokens_) {
    throw Error(ErrorCode::context_overflow, "token count exceeds provider limit");
  }
  json request;
  request["tokens"] = std::vector<std::string>(tokens.begin(), tokens.end());
  const json response = post_json(config_, request);
  if (!response.contains("vectors") || !response["vectors"].is_array()) {
    throw Error(ErrorCode::transport, "embedder response lacks a vectors array");
  }

  std::vector<std::vector<double>> rows;
  for (const auto& row : response["vectors"]) {
    rows.push_back(row.get<std::vector<double>>());
  }
  if (rows.size() != tokens.size()) {
    throw Error(ErrorCode::transport, "embedder returned " + std::to_string(rows.size()) +
                                          " vectors for " + std::to_string(tokens.size()) +
                                          " tokens");
  }
  try {
    return TokenEmbeddings::from_rows(rows);
  } catch (const Error&) {
    throw Error(ErrorCode::transport, "embedder returned ragged vectors");
  }
}

RemoteGenerator::RemoteGenerator(RemoteConfig config, std::size_t max_tokens)
    : config_(std::move(config)), max_tokens_(max_tokens) {}

std::string RemoteGenerator::generate(std::string_view prompt) {
  if (prompt.empty()) {
    throw Error(ErrorCode::invalid_argument, "prompt must be nonempty");
  }
  json request;
  request["prompt"] = std::string(prompt);
  request["max_tokens"] = max_tokens_;
  const json response = post_json(config_, request);
  if (!response.contains("text") || !response["text"].is_string()) {
    throw Error(ErrorCode::transport, "generator response lacks a text field");
  }
  return response["text"].get<std::string>();
}

}  // namespace cpc
