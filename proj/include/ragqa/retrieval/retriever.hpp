#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ragqa/providers/provider.hpp"
#include "ragqa/retrieval/vector_index.hpp"

namespace ragqa::retrieval {

struct ScoredChunk {
    std::string chunk_id;
    std::string text;
    std::string source_path;
    double sim_score = 0;
    std::optional<double> rerank_score;
    std::size_t entry = 0;  // position in the index

    json to_json() const;
};

/// The k most similar entries, sim_score descending, ties by chunk_id ascending.
/// Throws ValidationError when k < 1 or dimensions differ.
std::vector<ScoredChunk> top_k(const VectorIndex& index, std::span<const float> query_vec, std::size_t k);

/// Greedy maximal marginal relevance over `vectors`. The first pick is the
/// pure similarity argmax; each later pick maximizes
///   lambda * sim(d, q) - (1 - lambda) * max over selected s of sim(d, s).
/// Ties go to the smaller id. Returns positions into `vectors`.
std::vector<std::size_t> mmr_order(std::span<const float> query_vec, const std::vector<std::span<const float>>& vectors,
                                   const std::vector<std::string>& ids, double lambda, std::size_t k);

/// mmr_order applied to candidates drawn from `index`.
std::vector<ScoredChunk> mmr_select(const VectorIndex& index, std::span<const float> query_vec,
                                    const std::vector<ScoredChunk>& candidates, double lambda, std::size_t k);

struct RetrieveOptions {
    std::size_t fetch_k = 10;
    std::size_t final_k = 5;
    double lambda = 0.5;
    std::size_t pool_factor = 2;  // similarity pool = pool_factor * fetch_k
    bool rerank = true;

    void validate() const;
};

struct RetrievalResult {
    std::vector<ScoredChunk> chunks;
    bool rerank_degraded = false;  // reranker failed; chunks are in MMR order
    std::string warning;
    double embed_ms = 0;
    double search_ms = 0;
    double rerank_ms = 0;
};

/// embed -> top (pool_factor * fetch_k) by cosine -> MMR to fetch_k ->
/// rerank -> best final_k by rerank score (ties by chunk_id). Without a
/// reranker, or when it fails, the first final_k in MMR order are returned.
/// Throws MissingArtifactError("index empty") for an empty index.
RetrievalResult retrieve(const std::string& question, const VectorIndex& index, providers::EmbeddingProvider& embed,
                         providers::RerankProvider* rerank, const RetrieveOptions& options = {});

}  // namespace ragqa::retrieval
