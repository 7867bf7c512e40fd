#include "ragqa/acquisition/crawler.hpp"

#include <spdlog/spdlog.h>

#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "ragqa/acquisition/url.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/net/http.hpp"

namespace ragqa::acquisition {
namespace {

struct FrontierItem {
    std::string url;
    int depth = 0;
    std::string seed_origin;
    std::string referrer;
};

std::string robots_url_for(const Url& u) {
    return u.scheme + "://" + u.authority() + "/robots.txt";
}

}  // namespace

void CrawlPolicy::validate() const {
    if (max_depth < 0) throw ValidationError("max_depth must be >= 0");
    if (max_pages < 1) throw ValidationError("max_pages must be >= 1");
    if (per_host_delay.count() < 0) throw ValidationError("per_host_delay must be >= 0");
    if (workers < 1) throw ValidationError("workers must be >= 1");
}

HttpFetcher::HttpFetcher(std::chrono::milliseconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

FetchResult HttpFetcher::fetch(const std::string& url) {
    net::HttpOptions opts;
    opts.timeout = timeout_;
    opts.user_agent = user_agent_;
    auto resp = net::http_get(url, opts);
    return FetchResult{resp.status, std::move(resp.body), std::move(resp.content_type), std::move(resp.error)};
}

CrawlResult crawl(const std::vector<std::string>& seeds, const CrawlPolicy& policy, Fetcher& fetcher) {
    policy.validate();

    CrawlResult result;
    std::unordered_set<std::string> enqueued;
    std::vector<FrontierItem> frontier;
    for (const auto& seed : seeds) {
        if (!is_http_url(seed)) throw ValidationError("seed is not an absolute http(s) URL: " + seed);
        auto canonical = canonicalize(seed);
        if (!enqueued.insert(*canonical).second) continue;
        frontier.push_back(FrontierItem{*canonical, 0, *canonical, {}});
    }

    PolitenessGate gate(policy.per_host_delay);
    std::unordered_map<std::string, RobotsRules> robots;

    auto robots_allows = [&](const Url& u) {
        if (!policy.respect_robots) return true;
        const std::string host = u.authority();
        auto it = robots.find(host);
        if (it == robots.end()) {
            gate.acquire(host);
            const FetchResult r = fetcher.fetch(robots_url_for(u));
            RobotsRules rules = r.status >= 200 && r.status < 300
                                    ? RobotsRules::parse(r.body, policy.user_agent)
                                    : RobotsRules::allow_all();
            it = robots.emplace(host, std::move(rules)).first;
        }
        return it->second.allowed(u.path + (u.has_query ? "?" + u.query : std::string{}));
    };

    for (int depth = 0; depth <= policy.max_depth && !frontier.empty(); ++depth) {
        std::vector<FrontierItem> next;
        std::size_t cursor = 0;
        while (cursor < frontier.size() && result.documents.size() < policy.max_pages) {
            const std::size_t budget = std::min(policy.workers, policy.max_pages - result.documents.size());
            std::vector<const FrontierItem*> batch;
            while (cursor < frontier.size() && batch.size() < budget) {
                const FrontierItem& item = frontier[cursor++];
                const auto parsed = Url::parse(item.url);
                if (!robots_allows(*parsed)) {
                    result.robots_blocked.push_back(item.url);
                    continue;
                }
                batch.push_back(&item);
            }

            std::vector<FetchResult> fetched(batch.size());
            std::vector<std::chrono::system_clock::time_point> fetched_at(batch.size());
            {
                std::vector<std::jthread> workers;
                workers.reserve(batch.size());
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    workers.emplace_back([&, i] {
                        gate.acquire(host_key(batch[i]->url));
                        fetched_at[i] = std::chrono::system_clock::now();
                        fetched[i] = fetcher.fetch(batch[i]->url);
                    });
                }
            }

            for (std::size_t i = 0; i < batch.size(); ++i) {
                const FrontierItem& item = *batch[i];
                FetchResult& r = fetched[i];
                if (r.status == 0 || r.status < 200 || r.status >= 300) {
                    result.failures.push_back(FetchFailure{
                        item.url, item.depth, r.status,
                        r.status == 0 ? (r.error.empty() ? "transport error" : r.error)
                                      : "http status " + std::to_string(r.status)});
                    spdlog::debug("fetch failed {} ({})", item.url, result.failures.back().reason);
                    continue;
                }
                const auto kind = sniff_media_kind(r.body, r.content_type);
                if (!kind) {
                    result.failures.push_back(FetchFailure{item.url, item.depth, r.status,
                                                           "unsupported media type " + r.content_type});
                    continue;
                }
                if (*kind == MediaKind::html && item.depth < policy.max_depth) {
                    for (auto& link : extract_links(r.body, item.url, policy.allowed_schemes)) {
                        if (enqueued.insert(link).second) {
                            next.push_back(FrontierItem{std::move(link), item.depth + 1, item.seed_origin, item.url});
                        }
                    }
                }
                RawDocument doc;
                doc.url = item.url;
                doc.fetched_at = fetched_at[i];
                doc.media_kind = *kind;
                doc.body = std::move(r.body);
                doc.depth = item.depth;
                doc.seed_origin = item.seed_origin;
                doc.referrer = item.referrer;
                result.documents.push_back(std::move(doc));
                if (result.documents.size() >= policy.max_pages) break;
            }
        }
        if (result.documents.size() >= policy.max_pages) {
            result.hit_page_limit = cursor < frontier.size() || !next.empty();
            break;
        }
        frontier = std::move(next);
    }
    result.request_log = gate.log();
    return result;
}

}  // namespace ragqa::acquisition
