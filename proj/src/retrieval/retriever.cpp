#include "ragqa/retrieval/retriever.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <limits>

#include "ragqa/errors.hpp"
#include "ragqa/retrieval/similarity.hpp"

namespace ragqa::retrieval {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

ScoredChunk scored_from(const VectorIndex& index, std::size_t i, double sim) {
    const auto& e = index.at(i);
    return ScoredChunk{e.chunk_id, e.text, e.source_path, sim, std::nullopt, i};
}

}  // namespace

json ScoredChunk::to_json() const {
    json j{{"chunk_id", chunk_id}, {"text", text}, {"source_path", source_path}, {"sim_score", sim_score}};
    j["rerank_score"] = rerank_score ? json(*rerank_score) : json(nullptr);
    return j;
}

std::vector<ScoredChunk> top_k(const VectorIndex& index, std::span<const float> query_vec, std::size_t k) {
    if (k < 1) throw ValidationError("k must be at least 1");
    if (query_vec.size() != index.dim()) {
        throw ValidationError("query dimension " + std::to_string(query_vec.size()) + " does not match index dimension " +
                              std::to_string(index.dim()));
    }
    std::vector<ScoredChunk> all;
    all.reserve(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        all.push_back(scored_from(index, i, cosine_sim(query_vec, index.at(i).vector)));
    }
    const auto better = [](const ScoredChunk& a, const ScoredChunk& b) {
        if (a.sim_score != b.sim_score) return a.sim_score > b.sim_score;
        return a.chunk_id < b.chunk_id;
    };
    const std::size_t n = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), better);
    all.resize(n);
    return all;
}

std::vector<std::size_t> mmr_order(std::span<const float> query_vec, const std::vector<std::span<const float>>& vectors,
                                   const std::vector<std::string>& ids, double lambda, std::size_t k) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must be in [0, 1]");
    if (k < 1) throw ValidationError("k must be at least 1");
    if (ids.size() != vectors.size()) throw ValidationError("mmr ids and vectors differ in length");

    const std::size_t n = vectors.size();
    std::vector<double> query_sim(n);
    for (std::size_t i = 0; i < n; ++i) query_sim[i] = cosine_sim(vectors[i], query_vec);

    // max similarity of each candidate to anything selected so far
    std::vector<double> redundancy(n, -std::numeric_limits<double>::infinity());
    std::vector<bool> taken(n, false);
    std::vector<std::size_t> order;
    const std::size_t want = std::min(k, n);
    while (order.size() < want) {
        std::size_t best = n;
        double best_score = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            const double score =
                order.empty() ? query_sim[i] : lambda * query_sim[i] - (1.0 - lambda) * redundancy[i];
            if (best == n || score > best_score || (score == best_score && ids[i] < ids[best])) {
                best = i;
                best_score = score;
            }
        }
        taken[best] = true;
        order.push_back(best);
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) redundancy[i] = std::max(redundancy[i], cosine_sim(vectors[i], vectors[best]));
        }
    }
    return order;
}

std::vector<ScoredChunk> mmr_select(const VectorIndex& index, std::span<const float> query_vec,
                                    const std::vector<ScoredChunk>& candidates, double lambda, std::size_t k) {
    std::vector<std::span<const float>> vectors;
    std::vector<std::string> ids;
    for (const auto& c : candidates) {
        vectors.emplace_back(index.at(c.entry).vector);
        ids.push_back(c.chunk_id);
    }
    std::vector<ScoredChunk> out;
    for (const std::size_t i : mmr_order(query_vec, vectors, ids, lambda, k)) out.push_back(candidates[i]);
    return out;
}

void RetrieveOptions::validate() const {
    if (fetch_k < 1 || final_k < 1) throw ValidationError("fetch_k and final_k must be at least 1");
    if (final_k > fetch_k) throw ValidationError("final_k must not exceed fetch_k");
    if (pool_factor < 1) throw ValidationError("pool_factor must be at least 1");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must be in [0, 1]");
}

RetrievalResult retrieve(const std::string& question, const VectorIndex& index, providers::EmbeddingProvider& embed,
                         providers::RerankProvider* rerank, const RetrieveOptions& options) {
    options.validate();
    if (index.empty()) throw MissingArtifactError("index empty");
    RetrievalResult result;

    auto t0 = Clock::now();
    const providers::Embedding q = embed.embed(question);
    result.embed_ms = ms_since(t0);

    t0 = Clock::now();
    const auto pool = top_k(index, q, options.pool_factor * options.fetch_k);
    auto selected = mmr_select(index, q, pool, options.lambda, options.fetch_k);
    result.search_ms = ms_since(t0);

    if (rerank) {
        t0 = Clock::now();
        try {
            std::vector<std::string> texts;
            texts.reserve(selected.size());
            for (const auto& c : selected) texts.push_back(c.text);
            const auto scores = rerank->score_pairs(question, texts);
            for (std::size_t i = 0; i < selected.size(); ++i) selected[i].rerank_score = scores[i];
            std::stable_sort(selected.begin(), selected.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
                if (*a.rerank_score != *b.rerank_score) return *a.rerank_score > *b.rerank_score;
                return a.chunk_id < b.chunk_id;
            });
        } catch (const providers::ProviderError& e) {
            for (auto& c : selected) c.rerank_score.reset();
            result.rerank_degraded = true;
            result.warning = std::string("reranker unavailable, using MMR order: ") + e.what();
            spdlog::warn("{}", result.warning);
        }
        result.rerank_ms = ms_since(t0);
    }
    if (selected.size() > options.final_k) selected.resize(options.final_k);
    result.chunks = std::move(selected);
    return result;
}

}  // namespace ragqa::retrieval
