#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ragqa::acquisition {

enum class MediaKind { html, pdf };

std::string_view to_string(MediaKind kind);

struct CrawlPolicy {
    int max_depth = 2;
    std::size_t max_pages = 10000;
    std::chrono::milliseconds per_host_delay{500};
    std::chrono::milliseconds timeout{10000};
    std::set<std::string> allowed_schemes{"http", "https"};
    std::string user_agent = "ragqa-crawler/1.0";
    std::size_t workers = 4;
    bool respect_robots = true;

    /// Throws ValidationError when an invariant is broken.
    void validate() const;
};

struct RawDocument {
    std::string url;  // canonical
    std::chrono::system_clock::time_point fetched_at;
    MediaKind media_kind = MediaKind::html;
    std::string body;
    int depth = 0;
    std::string seed_origin;
    std::string referrer;              // parent page that linked here; empty for seeds
    std::optional<std::string> paper_id;  // set for scholarly PDFs
};

/// Sniffs the body: "%PDF" header wins, then HTML markers, then the content
/// type. nullopt for anything else.
std::optional<MediaKind> sniff_media_kind(std::string_view body, std::string_view content_type);

/// Anchor (`<a href>`) and `<area href>` targets resolved against `base`
/// (honouring `<base href>`), fragments stripped, filtered to `allowed_schemes`,
/// canonicalized and deduplicated preserving first-seen order.
std::vector<std::string> extract_links(std::string_view html_body, std::string_view base,
                                       const std::set<std::string>& allowed_schemes = {"http", "https"});

struct FetchResult {
    int status = 0;  // 0 on transport failure
    std::string body;
    std::string content_type;
    std::string error;
};

/// Transport seam for the crawler and scholarly client.
class Fetcher {
public:
    virtual ~Fetcher() = default;
    virtual FetchResult fetch(const std::string& url) = 0;
};

class HttpFetcher final : public Fetcher {
public:
    HttpFetcher(std::chrono::milliseconds timeout, std::string user_agent);
    FetchResult fetch(const std::string& url) override;

private:
    std::chrono::milliseconds timeout_;
    std::string user_agent_;
};

/// robots.txt rules for a single user agent. Longest-match wins between
/// Allow and Disallow; `*` wildcards and `$` anchors are supported.
class RobotsRules {
public:
    static RobotsRules parse(std::string_view robots_txt, std::string_view user_agent);
    static RobotsRules allow_all() { return {}; }

    bool allowed(std::string_view path_and_query) const;

private:
    struct Rule {
        std::string pattern;
        bool allow;
    };
    std::vector<Rule> rules_;
};

/// Serializes request start times per host so consecutive starts for one
/// host are at least `delay` apart, regardless of how many workers share it.
class PolitenessGate {
public:
    explicit PolitenessGate(std::chrono::milliseconds delay) : delay_(delay) {}

    /// Blocks until this caller may start a request to `host`; returns the
    /// reserved start time.
    std::chrono::steady_clock::time_point acquire(const std::string& host);

    /// (host, start) pairs in reservation order.
    std::vector<std::pair<std::string, std::chrono::steady_clock::time_point>> log() const;

private:
    std::chrono::milliseconds delay_;
    mutable std::mutex mu_;
    std::map<std::string, std::chrono::steady_clock::time_point> next_allowed_;
    std::vector<std::pair<std::string, std::chrono::steady_clock::time_point>> log_;
};

struct FetchFailure {
    std::string url;
    int depth = 0;
    int status = 0;
    std::string reason;
};

struct CrawlResult {
    std::vector<RawDocument> documents;  // BFS level order
    std::vector<FetchFailure> failures;
    std::vector<std::string> robots_blocked;
    bool hit_page_limit = false;
    std::vector<std::pair<std::string, std::chrono::steady_clock::time_point>> request_log;
};

/// Breadth-first crawl from every seed. Depth counts hops from the seed a
/// page was first reached from. Pages of a level are fetched concurrently
/// but committed in frontier order, so output order is deterministic.
CrawlResult crawl(const std::vector<std::string>& seeds, const CrawlPolicy& policy, Fetcher& fetcher);

/// One absolute URL per line, `#` comments and blank lines ignored.
std::vector<std::string> parse_seed_file(std::string_view contents);

}  // namespace ragqa::acquisition
