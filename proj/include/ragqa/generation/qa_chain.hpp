#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ragqa/generation/qa_prompt.hpp"
#include "ragqa/providers/provider.hpp"
#include "ragqa/retrieval/retriever.hpp"

namespace ragqa::generation {

struct StageTimings {
    double embed_ms = 0;
    double search_ms = 0;
    double rerank_ms = 0;
    double generate_ms = 0;
    double total_ms = 0;
};

struct SystemAnswer {
    std::string question;
    std::string answer;
    std::vector<retrieval::ScoredChunk> contexts;  // exactly what the model saw, rank order
    bool used_rag = false;
    std::string model_id;
    bool truncated = false;       // contexts were dropped to fit the budget
    bool rerank_degraded = false;
    std::string warning;
    std::size_t answer_words = 0;
    StageTimings timings;

    /// Timings are omitted unless requested so reruns compare byte-equal.
    json to_json(bool with_timings = false) const;
};

/// Generation failed after retrieval succeeded; the evidence is kept.
class AnswerError : public providers::ProviderError {
public:
    AnswerError(const std::string& what, SystemAnswer partial)
        : providers::ProviderError(what, false), partial_(std::move(partial)) {}
    const SystemAnswer& partial() const noexcept { return partial_; }

private:
    SystemAnswer partial_;
};

struct ChainOptions {
    retrieval::RetrieveOptions retrieve;
    std::size_t char_budget = 0;  // 0 = unlimited
    QAPromptTemplate prompt = QAPromptTemplate::default_template();
};

/// retrieve -> render -> generate. Holds references; the index and
/// providers must outlive it. Safe for concurrent use when the providers are.
class QaChain {
public:
    QaChain(const retrieval::VectorIndex& index, providers::EmbeddingProvider& embed,
            providers::RerankProvider* rerank, providers::GenerationProvider& generate, ChainOptions options = {});

    SystemAnswer answer(const std::string& question) const;
    SystemAnswer answer(const std::string& question, const retrieval::RetrieveOptions& retrieve_options) const;

    /// Same template with an empty context slot.
    SystemAnswer answer_baseline(const std::string& question) const;

    const retrieval::VectorIndex& index() const noexcept { return index_; }
    const ChainOptions& options() const noexcept { return options_; }

private:
    SystemAnswer generate_from(SystemAnswer draft) const;

    const retrieval::VectorIndex& index_;
    providers::EmbeddingProvider& embed_;
    providers::RerankProvider* rerank_;
    providers::GenerationProvider& generate_;
    ChainOptions options_;
};

struct FinetuneExportStats {
    std::size_t written = 0;
    std::size_t missing_chunk = 0;
};

/// One {"text", "question", "context", "answer", "chunk_id"} record per QA
/// pair whose chunk exists, in the fine-tuning layout.
FinetuneExportStats export_finetune(const std::filesystem::path& qa_path, const std::filesystem::path& chunks_path,
                                    const std::filesystem::path& out_path);

}  // namespace ragqa::generation
