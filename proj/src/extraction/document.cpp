#include "ragqa/extraction/document.hpp"

#include "ragqa/acquisition/url.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::extraction {

void CleanDocument::refresh_count() { char_count = text::utf8_length(text); }

std::string_view to_string(FilterReason r) {
    switch (r) {
        case FilterReason::ok: return "ok";
        case FilterReason::no_keyword: return "no_keyword";
        case FilterReason::too_short: return "too_short";
        case FilterReason::error_page: return "error_page";
    }
    return "ok";
}

FilterReason filter_reason_from(std::string_view s) {
    if (s == "ok") return FilterReason::ok;
    if (s == "no_keyword") return FilterReason::no_keyword;
    if (s == "too_short") return FilterReason::too_short;
    if (s == "error_page") return FilterReason::error_page;
    throw FormatError("unknown filter reason: " + std::string(s));
}

std::string doc_id_for(std::string_view url) {
    const auto canon = acquisition::canonicalize(url);
    return text::hex64(text::fnv1a64(canon ? *canon : url));
}

}  // namespace ragqa::extraction
