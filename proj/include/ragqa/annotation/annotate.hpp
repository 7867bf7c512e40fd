#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ragqa/annotation/prompt.hpp"
#include "ragqa/chunking/chunker.hpp"
#include "ragqa/providers/provider.hpp"

namespace ragqa::annotation {

enum class Split { train, test, unsplit };

std::string_view to_string(Split s);
Split split_from(std::string_view s);

struct QAPair {
    std::string question;
    std::string answer;
    std::string chunk_id;
    Split split = Split::unsplit;

    bool operator==(const QAPair&) const = default;
};

struct AnnotationOptions {
    std::size_t num_qas = 10;
    std::size_t max_attempts = 2;  // the first call plus one retry
    std::size_t concurrency = 1;
};

struct ChunkReport {
    std::string chunk_id;
    std::string status;  // ok | empty | parse_failed | provider_failed
    std::size_t attempts = 0;
    std::size_t pairs_kept = 0;
    std::size_t pairs_dropped = 0;     // malformed entries
    std::size_t duplicates_dropped = 0;
    std::string error;
};

struct AnnotationResult {
    std::vector<QAPair> pairs;  // chunk order
    std::vector<ChunkReport> chunks;

    json report_json() const;
};

/// Prompts the generator once per chunk and parses the reply. Unparseable
/// replies and provider errors are retried up to max_attempts, then the
/// chunk is skipped and reported. Exact duplicate pairs within a chunk are
/// dropped. Output order follows chunk order regardless of concurrency.
AnnotationResult annotate_corpus(const std::vector<chunking::Chunk>& chunks, providers::GenerationProvider& generator,
                                 const AnnotationOptions& options = {});

/// Random permutation under `seed`; the first floor(n * train_fraction)
/// go to train. Throws ValidationError when n < 2 or the fraction is not in (0, 1).
std::pair<std::vector<QAPair>, std::vector<QAPair>> split_dataset(std::vector<QAPair> pairs, double train_fraction,
                                                                  std::uint64_t seed);

std::size_t train_size(std::size_t n, double train_fraction);

void save_dataset(const std::filesystem::path& path, const std::vector<QAPair>& pairs);
std::vector<QAPair> load_dataset(const std::filesystem::path& path);

}  // namespace ragqa::annotation
