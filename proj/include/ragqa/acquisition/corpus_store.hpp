#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ragqa/acquisition/crawler.hpp"

namespace ragqa::acquisition {

/// Top-level corpus directory a raw document belongs to.
enum class Category { html, pdf, paper };

std::string_view to_string(Category c);
Category category_of(const RawDocument& doc);

/// Corpus-relative path a document would be stored at before collision
/// handling, e.g. "html/x/a/b.html" for http://x/a/b.
std::filesystem::path storage_name(const RawDocument& doc);

/// Writes the body under root/{html,pdf,paper}/ and a `<stem>.meta.json`
/// sidecar next to it. A name already taken by a different URL gets a
/// numeric `-1`, `-2`, ... suffix; re-storing the same URL overwrites.
/// Returns the path relative to `root`. Throws StorageError on write failure.
std::filesystem::path store_raw(const RawDocument& doc, const std::filesystem::path& root);

struct StoredRaw {
    RawDocument doc;
    Category category = Category::html;
    std::filesystem::path relative_path;  // relative to the corpus root
};

/// Every stored document with a readable sidecar, sorted by relative path.
std::vector<StoredRaw> load_raw_corpus(const std::filesystem::path& root);

}  // namespace ragqa::acquisition
