#pragma once

#include "ragqa/providers/provider.hpp"

namespace ragqa::providers {

// JSON-over-HTTP clients:
//   POST {endpoint}/embed    {"texts":[...]}                 -> {"vectors":[[...]], "dim":int}
//   POST {endpoint}/rerank   {"query":..., "documents":[...]} -> {"scores":[...]}
//   POST {endpoint}/generate {"prompt":..., "max_new_tokens":int, "temperature":num, "seed":int}
//                                                             -> {"text":...}

class HttpEmbedding final : public EmbeddingProvider {
public:
    using EmbeddingProvider::EmbeddingProvider;

protected:
    std::vector<Embedding> embed_raw(const std::vector<std::string>& texts) override;
};

class HttpReranker final : public RerankProvider {
public:
    using RerankProvider::RerankProvider;

protected:
    std::vector<double> score_raw(const std::string& query, const std::vector<std::string>& candidates) override;
};

class HttpGenerator final : public GenerationProvider {
public:
    using GenerationProvider::GenerationProvider;

protected:
    std::string generate_raw(const std::string& prompt) override;
};

/// POSTs with retries on transport errors and 5xx. 413, or a 400 whose body
/// mentions the context length, becomes ContextOverflowError.
json post_with_retries(const ProviderConfig& cfg, const std::string& path, const json& body);

}  // namespace ragqa::providers
