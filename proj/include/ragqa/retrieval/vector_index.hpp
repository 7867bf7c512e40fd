#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ragqa/chunking/chunker.hpp"
#include "ragqa/providers/provider.hpp"

namespace ragqa::retrieval {

struct IndexEntry {
    std::string chunk_id;
    std::string source_path;
    std::string text;
    providers::Embedding vector;
};

// On-disk layout, all integers little-endian:
//   8 bytes   magic "RAGIDX01"
//   u32       format version (1)
//   u32       dim
//   u64       entry count N
//   i64       build time, unix seconds
//   u32 + n   embedding model id (length-prefixed UTF-8)
//   N*dim     float32 vectors, IEEE-754, entry order
//   N times   chunk_id, source_path, text (each u32 length + bytes)
class VectorIndex {
public:
    static constexpr std::uint32_t kVersion = 1;

    VectorIndex() = default;
    VectorIndex(std::size_t dim, std::string model_id, std::int64_t built_at);

    /// Throws ValidationError on a wrong dimension or duplicate chunk_id.
    void add(IndexEntry entry);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::string& model_id() const noexcept { return model_id_; }
    std::int64_t built_at() const noexcept { return built_at_; }
    const std::vector<IndexEntry>& entries() const noexcept { return entries_; }
    const IndexEntry& at(std::size_t i) const { return entries_.at(i); }
    std::optional<std::size_t> find(const std::string& chunk_id) const;

    std::string serialize() const;
    static VectorIndex deserialize(std::string_view bytes);

    void save(const std::filesystem::path& path) const;
    /// Throws MissingArtifactError when absent, FormatError when malformed.
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::size_t dim_ = 0;
    std::string model_id_;
    std::int64_t built_at_ = 0;
    std::vector<IndexEntry> entries_;
    std::unordered_map<std::string, std::size_t> ids_;
};

/// SOURCE_DATE_EPOCH when set, else the current time.
std::int64_t default_build_time();

/// Embeds every chunk in store order. Throws ValidationError for an empty
/// store; provider errors propagate so a partial index is never produced.
VectorIndex build_index(const std::vector<chunking::Chunk>& chunks, providers::EmbeddingProvider& embed,
                        std::optional<std::int64_t> built_at = std::nullopt);

}  // namespace ragqa::retrieval
