#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ragqa/acquisition/corpus_store.hpp"

namespace ragqa::extraction {

using acquisition::Category;

struct CleanDocument {
    std::string doc_id;       // hex FNV-1a of the canonical URL
    std::string title;
    std::string text;         // UTF-8, no markup
    Category category = Category::html;
    std::string source_path;  // corpus-relative raw path
    std::size_t char_count = 0;  // Unicode scalar values in text
    std::string url;
    bool lossy_decode = false;  // invalid bytes were replaced with U+FFFD

    /// Recomputes char_count from text.
    void refresh_count();
};

enum class FilterReason { ok, no_keyword, too_short, error_page };

std::string_view to_string(FilterReason r);
FilterReason filter_reason_from(std::string_view s);

struct FilterVerdict {
    bool kept = true;
    FilterReason reason = FilterReason::ok;

    static FilterVerdict keep() { return {}; }
    static FilterVerdict drop(FilterReason r) { return {false, r}; }
};

/// Stable document id for a URL (canonicalized first when possible).
std::string doc_id_for(std::string_view url);

}  // namespace ragqa::extraction
