#include "ragqa/extraction/ingest.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <set>

#include "ragqa/errors.hpp"
#include "ragqa/extraction/extract.hpp"

namespace ragqa::extraction {
namespace fs = std::filesystem;
namespace {

constexpr std::array<Category, 3> kCategories{Category::html, Category::pdf, Category::paper};

void clear_previous_output(const fs::path& out_root) {
    for (const Category c : kCategories) {
        const fs::path dir = out_root / std::string(to_string(c));
        std::error_code ec;
        if (!fs::is_directory(dir, ec)) continue;
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (entry.is_regular_file() && (name.ends_with(".txt") || name.ends_with(".meta.json"))) {
                fs::remove(entry.path(), ec);
            }
        }
    }
}

json meta_json(const CleanDocument& doc) {
    return json{
        {"doc_id", doc.doc_id},
        {"title", doc.title},
        {"category", std::string(to_string(doc.category))},
        {"source_path", doc.source_path},
        {"url", doc.url},
        {"char_count", doc.char_count},
        {"lossy_decode", doc.lossy_decode},
        {"verdict", {{"kept", true}, {"reason", "ok"}}},
    };
}

}  // namespace

json IngestReport::to_json() const {
    json items = json::array();
    for (const auto& e : entries) {
        items.push_back({{"source_path", e.source_path},
                         {"doc_id", e.doc_id},
                         {"category", e.category},
                         {"title", e.title},
                         {"char_count", e.char_count},
                         {"status", e.status},
                         {"reason", e.reason},
                         {"lossy_decode", e.lossy_decode}});
    }
    return json{{"documents", items},
                {"kept", kept_by_category},
                {"dropped", dropped_by_reason},
                {"errors", errors},
                {"boilerplate_lines_removed", boilerplate_lines_removed}};
}

IngestReport ingest(const fs::path& raw_root, const fs::path& out_root, const IngestOptions& options) {
    if (options.keywords.empty()) throw ValidationError("keyword list is empty");
    std::error_code ec;
    if (!fs::is_directory(raw_root, ec)) throw MissingArtifactError("raw corpus not found: " + raw_root.string());

    const auto raw = acquisition::load_raw_corpus(raw_root);
    IngestReport report;
    for (const Category c : kCategories) report.kept_by_category[std::string(to_string(c))] = 0;

    std::vector<CleanDocument> docs;
    std::vector<std::size_t> entry_of;  // docs[i] -> report.entries index
    for (const auto& item : raw) {
        IngestEntry entry;
        entry.source_path = item.relative_path.generic_string();
        entry.category = std::string(to_string(item.category));
        try {
            CleanDocument doc = item.category == Category::html
                                    ? html_to_text(item.doc, entry.source_path, item.category)
                                    : pdf_to_text(item.doc, entry.source_path, item.category);
            entry.doc_id = doc.doc_id;
            entry_of.push_back(report.entries.size());
            docs.push_back(std::move(doc));
        } catch (const std::exception& e) {
            spdlog::warn("extraction failed: {}", e.what());
            entry.status = "error";
            entry.reason = e.what();
            ++report.errors;
        }
        report.entries.push_back(std::move(entry));
    }

    report.boilerplate_lines_removed = strip_boilerplate_lines(docs, options.boilerplate_share);

    clear_previous_output(out_root);
    std::set<std::string> written;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const CleanDocument& doc = docs[i];
        IngestEntry& entry = report.entries[entry_of[i]];
        entry.title = doc.title;
        entry.char_count = doc.char_count;
        entry.lossy_decode = doc.lossy_decode;

        const FilterVerdict v = apply_filters(doc, options.keywords, options.min_chars);
        if (!v.kept) {
            entry.status = "dropped";
            entry.reason = std::string(to_string(v.reason));
            ++report.dropped_by_reason[entry.reason];
            continue;
        }
        if (!written.insert(doc.doc_id).second) {
            entry.status = "duplicate";
            entry.reason = "doc_id already written";
            continue;
        }
        save_clean_document(out_root, doc);
        entry.status = "kept";
        entry.reason = "ok";
        ++report.kept_by_category[entry.category];
    }

    io::write_file(out_root / "ingest_report.json", io::dump_pretty(report.to_json()));
    return report;
}

void save_clean_document(const fs::path& clean_root, const CleanDocument& doc) {
    const fs::path dir = clean_root / std::string(to_string(doc.category));
    io::write_file(dir / (doc.doc_id + ".txt"), doc.text);
    io::write_file(dir / (doc.doc_id + ".meta.json"), io::dump_pretty(meta_json(doc)));
}

std::vector<CleanDocument> load_clean_corpus(const fs::path& clean_root) {
    std::error_code ec;
    if (!fs::is_directory(clean_root, ec)) throw MissingArtifactError("clean corpus not found: " + clean_root.string());
    std::vector<CleanDocument> out;
    for (const Category c : kCategories) {
        const fs::path dir = clean_root / std::string(to_string(c));
        if (!fs::is_directory(dir, ec)) continue;
        std::vector<fs::path> metas;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().filename().string().ends_with(".meta.json")) metas.push_back(entry.path());
        }
        std::sort(metas.begin(), metas.end());
        for (const auto& meta_path : metas) {
            const json meta = json::parse(io::read_file(meta_path));
            CleanDocument doc;
            doc.doc_id = meta.at("doc_id").get<std::string>();
            doc.title = meta.value("title", "");
            doc.category = c;
            doc.source_path = meta.value("source_path", "");
            doc.url = meta.value("url", "");
            doc.lossy_decode = meta.value("lossy_decode", false);
            doc.text = io::read_file(dir / (doc.doc_id + ".txt"));
            doc.refresh_count();
            out.push_back(std::move(doc));
        }
    }
    return out;
}

}  // namespace ragqa::extraction
