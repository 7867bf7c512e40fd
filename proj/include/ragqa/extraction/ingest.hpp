#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ragqa/extraction/document.hpp"
#include "ragqa/extraction/filters.hpp"
#include "ragqa/util/json_io.hpp"

namespace ragqa::extraction {

struct IngestOptions {
    std::vector<std::string> keywords = default_keywords();
    std::size_t min_chars = kDefaultMinChars;
    double boilerplate_share = 0.3;
};

struct IngestEntry {
    std::string source_path;
    std::string doc_id;
    std::string category;
    std::string title;
    std::size_t char_count = 0;
    std::string status;  // kept | dropped | error | duplicate
    std::string reason;  // filter reason or error text
    bool lossy_decode = false;
};

struct IngestReport {
    std::vector<IngestEntry> entries;  // raw corpus order
    std::map<std::string, std::size_t> kept_by_category;
    std::map<std::string, std::size_t> dropped_by_reason;
    std::size_t errors = 0;
    std::size_t boilerplate_lines_removed = 0;

    json to_json() const;
};

/// Extracts, filters and writes every raw document under `raw_root` to
/// `out_root/{html,pdf,paper}/<doc_id>.txt` plus `<doc_id>.meta.json`, and
/// the report to `out_root/ingest_report.json`. Only kept documents are
/// written; earlier output in those directories is cleared first.
IngestReport ingest(const std::filesystem::path& raw_root, const std::filesystem::path& out_root,
                    const IngestOptions& options = {});

/// Writes `<doc_id>.txt` and `<doc_id>.meta.json` under clean_root/<category>/.
void save_clean_document(const std::filesystem::path& clean_root, const CleanDocument& doc);

/// Reads a clean corpus back, ordered by category then doc_id.
std::vector<CleanDocument> load_clean_corpus(const std::filesystem::path& clean_root);

}  // namespace ragqa::extraction
