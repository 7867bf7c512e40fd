#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ragqa/annotation/annotate.hpp"
#include "ragqa/generation/qa_chain.hpp"
#include "ragqa/providers/provider.hpp"
#include "ragqa/util/json_io.hpp"

namespace ragqa::evaluation {

struct EvalConfig {
    std::size_t sample_size = 128;
    std::size_t num_runs = 4;
    std::uint64_t seed = 0;
    bool rag_enabled = true;

    void validate() const;
};

/// Answers one question. Any exception marks the item failed.
using AnswerFn = std::function<std::string(const std::string& question)>;

/// RAG or baseline answers from a chain, per `rag_enabled`.
AnswerFn chain_pipeline(const generation::QaChain& chain, bool rag_enabled);

/// Metric names in table order.
inline constexpr std::array<std::string_view, 4> kTableMetrics{"recall", "f1", "cosine", "bleu"};
inline constexpr std::array<std::string_view, 5> kAllMetrics{"precision", "recall", "f1", "cosine", "bleu"};

struct ItemRecord {
    std::size_t run = 0;
    std::string question;
    std::string gold;
    std::string prediction;
    std::string chunk_id;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::optional<double> cosine;  // absent when the eval embedder failed
    double bleu = 0;
    bool failed = false;
    std::string error;

    std::optional<double> metric(std::string_view name) const;
};

struct MeanStd {
    double mean = 0;
    double std = 0;
};

struct RunSummary {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::size_t items = 0;
    std::size_t failed = 0;
    std::vector<std::pair<std::string, std::optional<double>>> means;  // kAllMetrics order

    std::optional<double> mean(std::string_view metric) const;
};

struct MetricReport {
    std::string label;
    EvalConfig config;
    std::size_t dataset_size = 0;
    std::size_t effective_sample = 0;
    std::vector<std::string> warnings;
    std::vector<ItemRecord> items;
    std::vector<RunSummary> runs;
    std::vector<std::pair<std::string, std::optional<MeanStd>>> aggregate;  // kAllMetrics order

    std::optional<MeanStd> stat(std::string_view metric) const;
    std::size_t failed_count() const;

    /// No timing fields, so equal inputs give byte-equal dumps.
    json to_json() const;
    /// Reads back label, config and aggregate; items and runs when present.
    static MetricReport from_json(const json& j);
};

/// "0.409 (0.012)", or "—" when absent.
std::string format_cell(const std::optional<MeanStd>& s);

/// Single-row "mean (std)" table for one report.
std::string render_table(const MetricReport& report);

/// Per run, draw sample_size items without replacement using seed + run,
/// answer, score. A sample larger than the dataset is clamped with a
/// warning. Failed items are kept in the records but excluded from means.
/// Grand mean and std are over run means, std with ddof 0.
/// `eval_embed` may be null, in which case cosine is absent everywhere.
MetricReport run_eval(const std::vector<annotation::QAPair>& dataset, const AnswerFn& pipeline,
                      providers::EmbeddingProvider* eval_embed, const EvalConfig& config, std::string label = {});

struct ComparisonRow {
    std::string name;
    std::array<std::optional<MeanStd>, kTableMetrics.size()> cells;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;

    json to_json() const;
    std::string to_text() const;
};

/// Throws ValidationError for fewer than two reports.
ComparisonTable compare_configs(const std::vector<std::pair<std::string, MetricReport>>& reports);

}  // namespace ragqa::evaluation
