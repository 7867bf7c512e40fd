#include "ragqa/chunking/chunker.hpp"

#include <spdlog/spdlog.h>

#include <set>

#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::chunking {

std::vector<Chunk> chunk_document(const extraction::CleanDocument& doc, std::size_t chunk_size) {
    if (chunk_size == 0) throw ValidationError("chunk size must be at least 1");
    const auto words = text::split_whitespace(doc.text);
    std::vector<Chunk> out;
    if (words.empty()) {
        spdlog::warn("document {} has no words; no chunks produced", doc.doc_id);
        return out;
    }
    for (std::size_t start = 0, index = 0; start < words.size(); start += chunk_size, ++index) {
        const std::size_t end = std::min(start + chunk_size, words.size());
        Chunk c;
        c.doc_id = doc.doc_id;
        c.index = index;
        c.chunk_id = doc.doc_id + "#" + std::to_string(index);
        c.word_count = end - start;
        c.source_path = doc.source_path;
        for (std::size_t i = start; i < end; ++i) {
            if (i > start) c.text.push_back(' ');
            c.text.append(words[i]);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Chunk> chunk_corpus(const std::vector<extraction::CleanDocument>& docs, std::size_t chunk_size) {
    std::vector<Chunk> out;
    for (const auto& d : docs) {
        auto part = chunk_document(d, chunk_size);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

void save_chunks(const std::filesystem::path& path, const std::vector<Chunk>& chunks) {
    std::vector<json> records;
    records.reserve(chunks.size());
    for (const auto& c : chunks) {
        records.push_back({{"chunk_id", c.chunk_id},
                           {"doc_id", c.doc_id},
                           {"index", c.index},
                           {"text", c.text},
                           {"word_count", c.word_count},
                           {"source_path", c.source_path}});
    }
    io::write_jsonl(path, records);
}

std::vector<Chunk> load_chunks(const std::filesystem::path& path) {
    std::vector<Chunk> out;
    std::set<std::string> ids;
    std::size_t line = 0;
    for (const auto& r : io::read_jsonl(path)) {
        ++line;
        try {
            Chunk c;
            c.chunk_id = r.at("chunk_id").get<std::string>();
            c.doc_id = r.at("doc_id").get<std::string>();
            c.index = r.at("index").get<std::size_t>();
            c.text = r.at("text").get<std::string>();
            c.word_count = r.at("word_count").get<std::size_t>();
            c.source_path = r.value("source_path", "");
            if (!ids.insert(c.chunk_id).second) throw FormatError("duplicate chunk_id " + c.chunk_id);
            out.push_back(std::move(c));
        } catch (const json::exception& e) {
            throw FormatError(path.string() + ": record " + std::to_string(line) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ragqa::chunking
