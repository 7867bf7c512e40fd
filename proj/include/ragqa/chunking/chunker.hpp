#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ragqa/extraction/document.hpp"

namespace ragqa::chunking {

constexpr std::size_t kDefaultChunkSize = 1000;

struct Chunk {
    std::string chunk_id;  // "<doc_id>#<index>"
    std::string doc_id;
    std::size_t index = 0;
    std::string text;      // words joined by single spaces
    std::size_t word_count = 0;
    std::string source_path;
};

/// Disjoint windows of `chunk_size` whitespace-delimited words. An empty
/// document yields no chunks. Throws ValidationError when chunk_size is 0.
std::vector<Chunk> chunk_document(const extraction::CleanDocument& doc, std::size_t chunk_size = kDefaultChunkSize);

std::vector<Chunk> chunk_corpus(const std::vector<extraction::CleanDocument>& docs,
                                std::size_t chunk_size = kDefaultChunkSize);

/// chunks.jsonl: one record per chunk with chunk_id, doc_id, index, text,
/// word_count and source_path.
void save_chunks(const std::filesystem::path& path, const std::vector<Chunk>& chunks);

/// Throws MissingArtifactError when absent, FormatError on a malformed record.
std::vector<Chunk> load_chunks(const std::filesystem::path& path);

}  // namespace ragqa::chunking
