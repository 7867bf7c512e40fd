#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "ragqa/acquisition/crawler.hpp"

namespace ragqa::acquisition {

struct ScholarQuery {
    std::vector<std::string> author_names;
    int year = 2023;
    bool open_access_only = true;

    void validate() const;
};

/// Client for a Semantic Scholar compatible graph API:
///   GET {base}/author/search?query=<name>&fields=name
///     -> {"data":[{"authorId":..., "name":...}]}
///   GET {base}/author/<id>/papers?fields=paperId,title,year,isOpenAccess,openAccessPdf&limit=1000
///     -> {"data":[{"paperId":..., "title":..., "year":int, "isOpenAccess":bool,
///                  "openAccessPdf":{"url":...} | null}]}
struct ScholarClientOptions {
    std::string base_url = "https://api.semanticscholar.org/graph/v1";
    int max_retries = 5;
    std::chrono::milliseconds initial_backoff{1000};
    std::chrono::milliseconds max_backoff{60000};
    /// Injected so tests can observe backoff without sleeping.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct PaperSkip {
    std::string paper_id;
    std::string title;
    std::string reason;  // no_open_access | download_failed | not_pdf
};

struct FetchPapersResult {
    std::vector<RawDocument> documents;
    std::vector<PaperSkip> skipped;
    std::vector<std::string> errors;  // per-author failures after retries
    std::vector<std::chrono::milliseconds> backoffs;
};

/// Open-access PDFs of papers written in `query.year` by any listed author,
/// deduplicated by paper id. Each document has media_kind=pdf, paper_id set
/// and seed_origin = the API URL that listed it.
FetchPapersResult fetch_papers(const ScholarQuery& query, const ScholarClientOptions& options,
                               Fetcher& fetcher);

/// One author name per line; blank lines and `#` comments skipped.
std::vector<std::string> parse_author_file(std::string_view contents);

}  // namespace ragqa::acquisition
