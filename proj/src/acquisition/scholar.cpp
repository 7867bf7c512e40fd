#include "ragqa/acquisition/scholar.hpp"

#include <spdlog/spdlog.h>

#include <set>
#include <thread>

#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::acquisition {
namespace {

bool is_rate_limited(int status) { return status == 429 || status == 503; }

class BackoffFetcher {
public:
    BackoffFetcher(const ScholarClientOptions& opts, Fetcher& inner, FetchPapersResult& result)
        : opts_(opts), inner_(inner), result_(result) {}

    FetchResult get(const std::string& url) {
        auto delay = opts_.initial_backoff;
        for (int attempt = 0;; ++attempt) {
            FetchResult r = inner_.fetch(url);
            if (!is_rate_limited(r.status) || attempt >= opts_.max_retries) return r;
            spdlog::info("rate limited on {}, backing off {} ms", url, delay.count());
            result_.backoffs.push_back(delay);
            if (opts_.sleep) {
                opts_.sleep(delay);
            } else {
                std::this_thread::sleep_for(delay);
            }
            delay = std::min(delay * 2, opts_.max_backoff);
        }
    }

private:
    const ScholarClientOptions& opts_;
    Fetcher& inner_;
    FetchPapersResult& result_;
};

json parse_data(const FetchResult& r, const std::string& url) {
    if (r.status < 200 || r.status >= 300) {
        throw std::runtime_error(url + ": " + (r.status == 0 ? r.error : "http status " + std::to_string(r.status)));
    }
    json body = json::parse(r.body);
    if (!body.contains("data") || !body["data"].is_array()) {
        throw std::runtime_error(url + ": response has no data array");
    }
    return body["data"];
}

std::string string_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_string()) return {};
    return obj[key].get<std::string>();
}

}  // namespace

void ScholarQuery::validate() const {
    if (author_names.empty()) throw ValidationError("author list is empty");
    for (const auto& a : author_names) {
        if (text::trim(a).empty()) throw ValidationError("author name is blank");
    }
    if (year < 1000 || year > 9999) throw ValidationError("year must have four digits");
}

FetchPapersResult fetch_papers(const ScholarQuery& query, const ScholarClientOptions& options,
                               Fetcher& fetcher) {
    query.validate();
    FetchPapersResult result;
    BackoffFetcher http(options, fetcher, result);
    std::set<std::string> seen_papers;

    for (const auto& name : query.author_names) {
        try {
            const std::string search_url =
                options.base_url + "/author/search?query=" + text::percent_encode(text::trim(name)) + "&fields=name";
            const json authors = parse_data(http.get(search_url), search_url);

            // Prefer exact (case-insensitive) name matches; fall back to the top hit.
            std::vector<std::string> author_ids;
            const std::string wanted = text::to_lower_ascii(text::trim(name));
            for (const auto& a : authors) {
                if (text::to_lower_ascii(string_field(a, "name")) == wanted) {
                    author_ids.push_back(string_field(a, "authorId"));
                }
            }
            if (author_ids.empty() && !authors.empty()) author_ids.push_back(string_field(authors.front(), "authorId"));

            for (const auto& author_id : author_ids) {
                if (author_id.empty()) continue;
                const std::string papers_url = options.base_url + "/author/" + text::percent_encode(author_id) +
                                               "/papers?fields=paperId,title,year,isOpenAccess,openAccessPdf&limit=1000";
                const json papers = parse_data(http.get(papers_url), papers_url);
                for (const auto& p : papers) {
                    if (!p.contains("year") || !p["year"].is_number_integer() || p["year"].get<int>() != query.year) {
                        continue;
                    }
                    const std::string paper_id = string_field(p, "paperId");
                    if (paper_id.empty() || !seen_papers.insert(paper_id).second) continue;
                    const std::string title = string_field(p, "title");

                    std::string pdf_url;
                    if (p.contains("openAccessPdf") && p["openAccessPdf"].is_object()) {
                        pdf_url = string_field(p["openAccessPdf"], "url");
                    }
                    if (pdf_url.empty()) {
                        result.skipped.push_back(PaperSkip{paper_id, title, "no_open_access"});
                        continue;
                    }
                    FetchResult pdf = http.get(pdf_url);
                    if (pdf.status < 200 || pdf.status >= 300) {
                        result.skipped.push_back(PaperSkip{paper_id, title, "download_failed"});
                        continue;
                    }
                    if (sniff_media_kind(pdf.body, pdf.content_type) != MediaKind::pdf) {
                        result.skipped.push_back(PaperSkip{paper_id, title, "not_pdf"});
                        continue;
                    }
                    RawDocument doc;
                    doc.url = pdf_url;
                    doc.fetched_at = std::chrono::system_clock::now();
                    doc.media_kind = MediaKind::pdf;
                    doc.body = std::move(pdf.body);
                    doc.depth = 0;
                    doc.seed_origin = papers_url;
                    doc.paper_id = paper_id;
                    result.documents.push_back(std::move(doc));
                }
            }
        } catch (const std::exception& e) {
            spdlog::warn("paper lookup failed for '{}': {}", name, e.what());
            result.errors.push_back(name + ": " + e.what());
        }
    }
    return result;
}

std::vector<std::string> parse_author_file(std::string_view contents) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= contents.size()) {
        const auto nl = contents.find('\n', start);
        const auto line = text::trim(contents.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                                          : nl - start));
        if (!line.empty() && line.front() != '#') out.emplace_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

}  // namespace ragqa::acquisition
