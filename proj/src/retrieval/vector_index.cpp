#include "ragqa/retrieval/vector_index.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"

namespace ragqa::retrieval {
namespace {

constexpr std::string_view kMagic = "RAGIDX01";

class Writer {
public:
    void bytes(std::string_view s) { out_.append(s); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f32(float f) { u32(std::bit_cast<std::uint32_t>(f)); }
    void str(std::string_view s) {
        if (s.size() > UINT32_MAX) throw ValidationError("string too long for index");
        u32(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}
    std::string_view bytes(std::size_t n) {
        need(n);
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::string str() { return std::string(bytes(u32())); }
    bool done() const noexcept { return pos_ == in_.size(); }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw FormatError("index file is truncated");
    }
    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

VectorIndex::VectorIndex(std::size_t dim, std::string model_id, std::int64_t built_at)
    : dim_(dim), model_id_(std::move(model_id)), built_at_(built_at) {
    if (dim == 0) throw ValidationError("index dimension must be positive");
}

void VectorIndex::add(IndexEntry entry) {
    if (entry.vector.size() != dim_) {
        throw ValidationError("vector for " + entry.chunk_id + " has dim " + std::to_string(entry.vector.size()) +
                              ", index expects " + std::to_string(dim_));
    }
    if (!ids_.emplace(entry.chunk_id, entries_.size()).second) {
        throw ValidationError("duplicate chunk_id in index: " + entry.chunk_id);
    }
    entries_.push_back(std::move(entry));
}

std::optional<std::size_t> VectorIndex::find(const std::string& chunk_id) const {
    const auto it = ids_.find(chunk_id);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::string VectorIndex::serialize() const {
    Writer w;
    w.bytes(kMagic);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(dim_));
    w.u64(entries_.size());
    w.u64(static_cast<std::uint64_t>(built_at_));
    w.str(model_id_);
    for (const auto& e : entries_) {
        for (const float f : e.vector) w.f32(f);
    }
    for (const auto& e : entries_) {
        w.str(e.chunk_id);
        w.str(e.source_path);
        w.str(e.text);
    }
    return w.take();
}

VectorIndex VectorIndex::deserialize(std::string_view bytes) {
    Reader r(bytes);
    if (bytes.size() < kMagic.size() || r.bytes(kMagic.size()) != kMagic) throw FormatError("not an index file (bad magic)");
    const std::uint32_t version = r.u32();
    if (version != kVersion) throw FormatError("unsupported index version " + std::to_string(version));
    const std::uint32_t dim = r.u32();
    const std::uint64_t count = r.u64();
    const auto built_at = static_cast<std::int64_t>(r.u64());
    std::string model_id = r.str();
    if (dim == 0) throw FormatError("index dimension is zero");
    if (count > r.remaining() / (4ULL * dim)) throw FormatError("index file is truncated");

    std::vector<providers::Embedding> vectors(count, providers::Embedding(dim));
    for (auto& v : vectors) {
        for (auto& f : v) f = r.f32();
    }
    VectorIndex index(dim, std::move(model_id), built_at);
    index.entries_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        IndexEntry e;
        e.chunk_id = r.str();
        e.source_path = r.str();
        e.text = r.str();
        e.vector = std::move(vectors[i]);
        try {
            index.add(std::move(e));
        } catch (const ValidationError& err) {
            throw FormatError(err.what());
        }
    }
    if (!r.done()) throw FormatError("trailing bytes after index table");
    return index;
}

void VectorIndex::save(const std::filesystem::path& path) const { io::write_file(path, serialize()); }

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    const std::string bytes = io::read_file(path);
    try {
        return deserialize(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::int64_t default_build_time() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (*end == '\0') return v;
    }
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

VectorIndex build_index(const std::vector<chunking::Chunk>& chunks, providers::EmbeddingProvider& embed,
                        std::optional<std::int64_t> built_at) {
    if (chunks.empty()) throw ValidationError("chunk store is empty; nothing to index");
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embed.embed_batch(texts);

    VectorIndex index(vectors.front().size(), embed.model_id(), built_at.value_or(default_build_time()));
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        index.add(IndexEntry{chunks[i].chunk_id, chunks[i].source_path, chunks[i].text, std::move(vectors[i])});
    }
    return index;
}

}  // namespace ragqa::retrieval
