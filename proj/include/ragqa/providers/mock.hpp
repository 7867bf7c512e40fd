#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ragqa/providers/provider.hpp"

namespace ragqa::providers {

/// Lowercase alphanumeric tokens used by every mock.
std::vector<std::string> mock_tokens(std::string_view text);

/// Bucket a token lands in: FNV-1a over the 8 little-endian seed bytes followed by the token, mod dim.
std::size_t mock_bucket(std::string_view token, std::size_t dim, std::uint64_t seed);

/// Normalized bucket-count histogram of the text's tokens. A text without
/// tokens hashes a fixed sentinel so the result is still unit length.
/// Throws ValidationError when dim < 8.
Embedding mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

/// Fraction of distinct query tokens present in the candidate.
double mock_rerank_score(std::string_view query, std::string_view candidate);

inline constexpr std::string_view kRefusal = "I don't know.";

/// Extractive answer: the context sentence sharing the most distinct tokens
/// with the question (earliest on ties), or kRefusal when the context is
/// empty or nothing overlaps. Annotation prompts get a JSON array of
/// question/answer pairs built from the passage instead.
std::string mock_generate(std::string_view prompt);

/// Splits on sentence-final punctuation followed by whitespace, and on line breaks.
std::vector<std::string> split_sentences(std::string_view text);

class MockEmbedding final : public EmbeddingProvider {
public:
    explicit MockEmbedding(ProviderConfig cfg);

protected:
    std::vector<Embedding> embed_raw(const std::vector<std::string>& texts) override;
};

class MockReranker final : public RerankProvider {
public:
    using RerankProvider::RerankProvider;

protected:
    std::vector<double> score_raw(const std::string& query, const std::vector<std::string>& candidates) override;
};

class MockGenerator final : public GenerationProvider {
public:
    using GenerationProvider::GenerationProvider;

protected:
    std::string generate_raw(const std::string& prompt) override;
};

}  // namespace ragqa::providers
