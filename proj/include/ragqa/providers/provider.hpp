#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ragqa/util/json_io.hpp"

namespace ragqa {
class ConfigFile;
}

namespace ragqa::providers {

using Embedding = std::vector<float>;

enum class Role { embedding, rerank, generation };

std::string_view to_string(Role r);

/// Any failure talking to a model. Maps to CLI exit code 4.
class ProviderError : public std::runtime_error {
public:
    ProviderError(const std::string& what, bool retryable) : std::runtime_error(what), retryable_(retryable) {}
    bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

/// The endpoint rejected the prompt as too long; the caller should shrink the context.
class ContextOverflowError : public ProviderError {
public:
    explicit ContextOverflowError(const std::string& what) : ProviderError(what, false) {}
};

struct ProviderConfig {
    Role role = Role::embedding;
    std::string endpoint = "mock:0";  // base URL, or "mock" / "mock:<seed>"
    std::string model_id;
    std::chrono::milliseconds timeout{60000};
    std::size_t max_batch = 32;
    int retries = 2;
    // generation
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::int64_t seed = 0;
    // mock embedding
    std::size_t mock_dim = 512;

    bool is_mock() const;
    /// Seed after "mock:", 0 for a bare "mock".
    std::uint64_t mock_seed() const;
    void validate() const;
};

class EmbeddingProvider {
public:
    explicit EmbeddingProvider(ProviderConfig cfg);
    virtual ~EmbeddingProvider() = default;

    /// One unit-norm vector per text, same order. Splits at max_batch.
    /// Throws ValidationError on empty input or an empty text, ProviderError
    /// on transport failure or when the dimension changes mid-session.
    std::vector<Embedding> embed_batch(const std::vector<std::string>& texts);
    Embedding embed(const std::string& text);

    const ProviderConfig& config() const noexcept { return cfg_; }
    const std::string& model_id() const noexcept { return cfg_.model_id; }
    /// Dimension seen so far; 0 before the first call.
    std::size_t dim() const noexcept { return dim_; }

protected:
    virtual std::vector<Embedding> embed_raw(const std::vector<std::string>& texts) = 0;

private:
    ProviderConfig cfg_;
    std::size_t dim_ = 0;
};

class RerankProvider {
public:
    explicit RerankProvider(ProviderConfig cfg);
    virtual ~RerankProvider() = default;

    /// One finite score per candidate, order-aligned.
    std::vector<double> score_pairs(const std::string& query, const std::vector<std::string>& candidates);

    const ProviderConfig& config() const noexcept { return cfg_; }
    const std::string& model_id() const noexcept { return cfg_.model_id; }

protected:
    virtual std::vector<double> score_raw(const std::string& query, const std::vector<std::string>& candidates) = 0;

private:
    ProviderConfig cfg_;
};

class GenerationProvider {
public:
    explicit GenerationProvider(ProviderConfig cfg);
    virtual ~GenerationProvider() = default;

    /// Completion text without the prompt.
    std::string generate(const std::string& prompt);

    const ProviderConfig& config() const noexcept { return cfg_; }
    const std::string& model_id() const noexcept { return cfg_.model_id; }

protected:
    virtual std::string generate_raw(const std::string& prompt) = 0;

private:
    ProviderConfig cfg_;
};

/// L2-normalizes in place. Throws ProviderError for a zero or non-finite vector.
void normalize(Embedding& v);

constexpr std::string_view kDefaultEmbedModel = "mixedbread-ai/mxbai-embed-large-v1";
constexpr std::string_view kDefaultRerankModel = "BAAI/bge-reranker-large";
constexpr std::string_view kDefaultGenerationModel = "meta-llama/Llama-2-7b-chat-hf";
constexpr std::string_view kDefaultEvalEmbedModel = "sentence-transformers/all-MiniLM-L6-v2";
constexpr std::string_view kDefaultAnnotatorModel = "WizardLM";

std::unique_ptr<EmbeddingProvider> make_embedding(const ProviderConfig& cfg);
std::unique_ptr<RerankProvider> make_reranker(const ProviderConfig& cfg);
std::unique_ptr<GenerationProvider> make_generator(const ProviderConfig& cfg);

/// The shared handles a pipeline needs. eval_embed backs the answer-cosine metric.
struct ProviderSet {
    std::shared_ptr<EmbeddingProvider> embed;
    std::shared_ptr<RerankProvider> rerank;
    std::shared_ptr<GenerationProvider> generate;
    std::shared_ptr<EmbeddingProvider> eval_embed;

    json describe() const;
};

/// Endpoint overrides from command-line flags; unset fields fall through to
/// RAG_EMBED_URL / RAG_RERANK_URL / RAG_GEN_URL, then the [providers] config
/// section, then "mock:0".
struct ProviderOverrides {
    std::optional<std::string> embed_url;
    std::optional<std::string> rerank_url;
    std::optional<std::string> gen_url;
    std::optional<std::string> eval_embed_url;
};

ProviderConfig resolve_config(Role role, const ProviderOverrides& flags, const ConfigFile& file,
                              bool for_eval_cosine = false);
ProviderSet make_provider_set(const ProviderOverrides& flags, const ConfigFile& file);

}  // namespace ragqa::providers
