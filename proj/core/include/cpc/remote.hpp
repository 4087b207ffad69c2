#pragma once

#include <cstddef>
#include <string>

#include "cpc/providers.hpp"

namespace cpc {

// Endpoint plus retry policy shared by the remote clients. Retries apply to
// rate-limit (429) responses only; exhausted retries surface rate_limit.
struct RemoteConfig {
  std::string url;      // e.g. http://host:port/path
  std::string api_key;  // sent as Authorization: Bearer when nonempty
  std::size_t retries = 2;
  std::size_t timeout_seconds = 30;
};

// Reads CPC_EMBED_URL / CPC_LLM_URL / CPC_API_KEY; empty strings when unset.
RemoteConfig remote_embedder_config_from_env();
RemoteConfig remote_generator_config_from_env();

// POST { "tokens": [...] } -> { "vectors": [[...]...] }. One fresh
// connection per request, so concurrent in-flight calls are safe.
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteConfig config, std::size_t max_tokens = 1u << 20);

  TokenEmbeddings embed_document(std::span<const std::string> tokens) const override;

 private:
  RemoteConfig config_;
  std::size_t max_tokens_;
};

// POST { "prompt": ..., "max_tokens": ... } -> { "text": ... }.
class RemoteGenerator final : public GenerationProvider {
 public:
  explicit RemoteGenerator(RemoteConfig config, std::size_t max_tokens = 512);

  std::string generate(std::string_view prompt) override;

 private:
  RemoteConfig config_;
  std::size_t max_tokens_;
};

}  // namespace cpc
