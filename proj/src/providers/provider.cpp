#include "ragqa/providers/provider.hpp"

#include <cmath>
#include <cstdlib>

#include "ragqa/errors.hpp"
#include "ragqa/providers/http_providers.hpp"
#include "ragqa/providers/mock.hpp"
#include "ragqa/util/config.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::providers {

std::string_view to_string(Role r) {
    switch (r) {
        case Role::embedding: return "embedding";
        case Role::rerank: return "rerank";
        case Role::generation: return "generation";
    }
    return "embedding";
}

bool ProviderConfig::is_mock() const { return endpoint == "mock" || endpoint.starts_with("mock:"); }

std::uint64_t ProviderConfig::mock_seed() const {
    if (endpoint.size() <= 5) return 0;
    const std::string digits = endpoint.substr(5);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(digits.c_str(), &end, 10);
    if (digits.empty() || *end != '\0') throw ValidationError("bad mock seed in endpoint '" + endpoint + "'");
    return v;
}

void ProviderConfig::validate() const {
    if (max_batch < 1) throw ValidationError("max_batch must be at least 1");
    if (!(temperature >= 0)) throw ValidationError("temperature must be non-negative");
    if (endpoint.empty()) throw ValidationError(std::string(to_string(role)) + " endpoint is empty");
    if (is_mock()) {
        (void)mock_seed();
    } else if (!endpoint.starts_with("http://") && !endpoint.starts_with("https://")) {
        throw ValidationError("endpoint must be http(s) or mock:<seed>, got '" + endpoint + "'");
    }
}

void normalize(Embedding& v) {
    double sq = 0;
    for (const float x : v) sq += static_cast<double>(x) * x;
    const double norm = std::sqrt(sq);
    if (!(norm > 0) || !std::isfinite(norm)) throw ProviderError("embedding has zero or non-finite norm", false);
    for (float& x : v) x = static_cast<float>(x / norm);
}

EmbeddingProvider::EmbeddingProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.role = Role::embedding;
    cfg_.validate();
}

std::vector<Embedding> EmbeddingProvider::embed_batch(const std::vector<std::string>& texts) {
    if (texts.empty()) throw ValidationError("embed_batch needs at least one text");
    for (const auto& t : texts) {
        if (t.empty()) throw ValidationError("cannot embed an empty text");
    }
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += cfg_.max_batch) {
        const std::size_t end = std::min(start + cfg_.max_batch, texts.size());
        const std::vector<std::string> batch(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                             texts.begin() + static_cast<std::ptrdiff_t>(end));
        auto vectors = embed_raw(batch);
        if (vectors.size() != batch.size()) {
            throw ProviderError("embedding endpoint returned " + std::to_string(vectors.size()) + " vectors for " +
                                    std::to_string(batch.size()) + " texts",
                                false);
        }
        for (auto& v : vectors) {
            if (v.empty()) throw ProviderError("embedding endpoint returned an empty vector", false);
            if (dim_ == 0) dim_ = v.size();
            if (v.size() != dim_) {
                throw ProviderError("embedding dimension changed from " + std::to_string(dim_) + " to " +
                                        std::to_string(v.size()) + "; check the embedding endpoint configuration",
                                    false);
            }
            normalize(v);
            out.push_back(std::move(v));
        }
    }
    return out;
}

Embedding EmbeddingProvider::embed(const std::string& text) { return std::move(embed_batch({text}).front()); }

RerankProvider::RerankProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.role = Role::rerank;
    cfg_.validate();
}

std::vector<double> RerankProvider::score_pairs(const std::string& query, const std::vector<std::string>& candidates) {
    if (candidates.empty()) throw ValidationError("score_pairs needs at least one candidate");
    std::vector<double> out;
    out.reserve(candidates.size());
    for (std::size_t start = 0; start < candidates.size(); start += cfg_.max_batch) {
        const std::size_t end = std::min(start + cfg_.max_batch, candidates.size());
        const std::vector<std::string> batch(candidates.begin() + static_cast<std::ptrdiff_t>(start),
                                             candidates.begin() + static_cast<std::ptrdiff_t>(end));
        const auto scores = score_raw(query, batch);
        if (scores.size() != batch.size()) throw ProviderError("rerank endpoint returned a wrong score count", false);
        for (const double s : scores) {
            if (!std::isfinite(s)) throw ProviderError("rerank endpoint returned a non-finite score", false);
            out.push_back(s);
        }
    }
    return out;
}

GenerationProvider::GenerationProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.role = Role::generation;
    cfg_.validate();
}

std::string GenerationProvider::generate(const std::string& prompt) {
    if (prompt.empty()) throw ValidationError("prompt is empty");
    return generate_raw(prompt);
}

std::unique_ptr<EmbeddingProvider> make_embedding(const ProviderConfig& cfg) {
    if (cfg.is_mock()) return std::make_unique<MockEmbedding>(cfg);
    return std::make_unique<HttpEmbedding>(cfg);
}

std::unique_ptr<RerankProvider> make_reranker(const ProviderConfig& cfg) {
    if (cfg.is_mock()) return std::make_unique<MockReranker>(cfg);
    return std::make_unique<HttpReranker>(cfg);
}

std::unique_ptr<GenerationProvider> make_generator(const ProviderConfig& cfg) {
    if (cfg.is_mock()) return std::make_unique<MockGenerator>(cfg);
    return std::make_unique<HttpGenerator>(cfg);
}

json ProviderSet::describe() const {
    json out = json::object();
    auto entry = [](const ProviderConfig& c) {
        return json{{"endpoint", c.endpoint}, {"model_id", c.model_id}};
    };
    if (embed) out["embedding"] = entry(embed->config());
    if (rerank) out["rerank"] = entry(rerank->config());
    if (generate) out["generation"] = entry(generate->config());
    if (eval_embed) out["eval_embedding"] = entry(eval_embed->config());
    return out;
}

namespace {

std::optional<std::string> file_value(const ConfigFile& file, const std::string& key) { return file.get(key); }

template <typename T>
T numeric(const ConfigFile& file, const std::string& key, T fallback) {
    const auto v = file_value(file, key);
    if (!v) return fallback;
    try {
        if constexpr (std::is_floating_point_v<T>) {
            return static_cast<T>(std::stod(*v));
        } else {
            return static_cast<T>(std::stoll(*v));
        }
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + " is not a number: " + *v);
    }
}

}  // namespace

ProviderConfig resolve_config(Role role, const ProviderOverrides& flags, const ConfigFile& file, bool for_eval_cosine) {
    ProviderConfig cfg;
    cfg.role = role;
    const std::string embed_endpoint =
        resolve_setting(flags.embed_url, "RAG_EMBED_URL", file, "providers.embed_url", "mock:0");
    switch (role) {
        case Role::embedding:
            if (for_eval_cosine) {
                cfg.endpoint = flags.eval_embed_url.value_or(file.get("providers.eval_embed_url").value_or(embed_endpoint));
                cfg.model_id = file.get("providers.eval_embed_model").value_or(std::string(kDefaultEvalEmbedModel));
            } else {
                cfg.endpoint = embed_endpoint;
                cfg.model_id = file.get("providers.embed_model").value_or(std::string(kDefaultEmbedModel));
            }
            break;
        case Role::rerank:
            cfg.endpoint = resolve_setting(flags.rerank_url, "RAG_RERANK_URL", file, "providers.rerank_url", "mock:0");
            cfg.model_id = file.get("providers.rerank_model").value_or(std::string(kDefaultRerankModel));
            break;
        case Role::generation:
            cfg.endpoint = resolve_setting(flags.gen_url, "RAG_GEN_URL", file, "providers.gen_url", "mock:0");
            cfg.model_id = file.get("providers.gen_model").value_or(std::string(kDefaultGenerationModel));
            break;
    }
    cfg.timeout = std::chrono::milliseconds(numeric<long long>(file, "providers.timeout_ms", cfg.timeout.count()));
    cfg.max_batch = numeric<std::size_t>(file, "providers.max_batch", cfg.max_batch);
    cfg.retries = numeric<int>(file, "providers.retries", cfg.retries);
    cfg.max_new_tokens = numeric<int>(file, "providers.max_new_tokens", cfg.max_new_tokens);
    cfg.temperature = numeric<double>(file, "providers.temperature", cfg.temperature);
    cfg.seed = numeric<std::int64_t>(file, "providers.seed", cfg.seed);
    cfg.mock_dim = numeric<std::size_t>(file, "providers.mock_dim", cfg.mock_dim);
    cfg.validate();
    return cfg;
}

ProviderSet make_provider_set(const ProviderOverrides& flags, const ConfigFile& file) {
    ProviderSet set;
    set.embed = make_embedding(resolve_config(Role::embedding, flags, file));
    set.rerank = make_reranker(resolve_config(Role::rerank, flags, file));
    set.generate = make_generator(resolve_config(Role::generation, flags, file));
    set.eval_embed = make_embedding(resolve_config(Role::embedding, flags, file, true));
    return set;
}

}  // namespace ragqa::providers
