#include <doctest.h>

#include <httplib.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include "fixture_server.hpp"
#include "ragqa/acquisition/corpus_store.hpp"
#include "ragqa/acquisition/crawler.hpp"
#include "ragqa/acquisition/scholar.hpp"
#include "ragqa/acquisition/url.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"

using namespace ragqa;
using namespace ragqa::acquisition;
namespace fs = std::filesystem;

namespace {

// In-memory web: url -> response. Unknown urls get 404.
class FakeFetcher final : public Fetcher {
public:
    void page(const std::string& url, const std::string& body, const std::string& type = "text/html") {
        pages_[url] = FetchResult{200, body, type, {}};
    }
    void fail(const std::string& url, int status) { pages_[url] = FetchResult{status, {}, {}, status ? "" : "refused"}; }
    void queue(const std::string& url, FetchResult r) { queued_[url].push_back(std::move(r)); }

    FetchResult fetch(const std::string& url) override {
        std::lock_guard lock(mu_);
        requests_.push_back(url);
        auto q = queued_.find(url);
        if (q != queued_.end() && !q->second.empty()) {
            FetchResult r = q->second.front();
            q->second.erase(q->second.begin());
            return r;
        }
        auto it = pages_.find(url);
        if (it == pages_.end()) return FetchResult{404, "not found", "text/plain", {}};
        return it->second;
    }

    std::vector<std::string> requests() const {
        std::lock_guard lock(mu_);
        return requests_;
    }

private:
    mutable std::mutex mu_;
    std::map<std::string, FetchResult> pages_;
    std::map<std::string, std::vector<FetchResult>> queued_;
    std::vector<std::string> requests_;
};

std::string html_linking(const std::vector<std::string>& hrefs) {
    std::string body = "<html><body><p>page</p>";
    for (const auto& h : hrefs) body += "<a href=\"" + h + "\">x</a>";
    return body + "</body></html>";
}

CrawlPolicy fast_policy(int depth) {
    CrawlPolicy p;
    p.max_depth = depth;
    p.per_host_delay = std::chrono::milliseconds(0);
    p.respect_robots = false;
    return p;
}

std::set<std::string> urls_of(const CrawlResult& r) {
    std::set<std::string> out;
    for (const auto& d : r.documents) out.insert(d.url);
    return out;
}

RawDocument html_doc(const std::string& url, const std::string& body = "<p>x</p>") {
    RawDocument d;
    d.url = url;
    d.body = body;
    d.depth = 1;
    d.seed_origin = "http://x/";
    return d;
}

}  // namespace

TEST_CASE("canonicalize") {
    CHECK(canonicalize("HTTP://Example.COM:80/a#frag") == "http://example.com/a");
    CHECK(canonicalize("https://x.org:443") == "https://x.org/");
    CHECK(canonicalize("http://x/a?") == "http://x/a");
    CHECK(canonicalize("http://x/a?b=1") == "http://x/a?b=1");
    CHECK(canonicalize("http://x/a/./b/../c") == "http://x/a/c");
    CHECK(canonicalize("http://x:8080/") == "http://x:8080/");
    CHECK_FALSE(canonicalize("/relative"));
    CHECK_FALSE(canonicalize("mailto:a@b"));
}

TEST_CASE("relative resolution") {
    const auto base = Url::parse("http://a/b/c/d;p?q");
    REQUIRE(base);
    auto r = [&](const char* ref) { return resolve(*base, ref)->str(); };
    CHECK(r("g") == "http://a/b/c/g");
    CHECK(r("./g") == "http://a/b/c/g");
    CHECK(r("g/") == "http://a/b/c/g/");
    CHECK(r("/g") == "http://a/g");
    CHECK(r("//g") == "http://g");
    CHECK(r("?y") == "http://a/b/c/d;p?y");
    CHECK(r("#s") == "http://a/b/c/d;p?q#s");
    CHECK(r("../g") == "http://a/b/g");
    CHECK(r("../../g") == "http://a/g");
    CHECK(r("../../../g") == "http://a/g");
}

TEST_CASE("extract_links examples") {
    CHECK(extract_links("<a href=\"/b\">b</a>", "http://x/a/") == std::vector<std::string>{"http://x/b"});
    CHECK(extract_links("<a href=\"#top\">top</a>", "http://x/a/").empty());
    CHECK(extract_links("<a href=\"/b\">1</a><a href=\"/b?\">2</a><a href=\"/b#f\">3</a>", "http://x/") ==
          std::vector<std::string>{"http://x/b"});
}

TEST_CASE("extract_links matches the canonicalizer on each href") {
    const std::vector<std::string> hrefs{"/b", "/b?", "c", "../d", "HTTP://X/e", "mailto:z@x", "ftp://x/f",
                                         "/b", "javascript:void(0)", "?q=1"};
    const std::string base = "http://x/a/";
    std::vector<std::string> want;
    for (const auto& h : hrefs) {
        const auto resolved = resolve(*Url::parse(base), h);
        if (!resolved || (resolved->scheme != "http" && resolved->scheme != "https")) continue;
        const auto c = canonicalize(resolved->str());
        if (c && std::find(want.begin(), want.end(), *c) == want.end()) want.push_back(*c);
    }
    CHECK(extract_links(html_linking(hrefs), base) == want);
}

TEST_CASE("extract_links honours base href, area and bad markup") {
    CHECK(extract_links("<base href=\"http://y/dir/\"><a href=\"p\">", "http://x/") ==
          std::vector<std::string>{"http://y/dir/p"});
    CHECK(extract_links("<map><area href=\"/m\"></map>", "http://x/") == std::vector<std::string>{"http://x/m"});
    CHECK(extract_links("<<<a href='/q'>unterminated <p", "http://x/") == std::vector<std::string>{"http://x/q"});
    CHECK(extract_links("", "http://x/").empty());
}

TEST_CASE("media sniffing") {
    CHECK(sniff_media_kind("%PDF-1.4 ...", "text/html") == MediaKind::pdf);
    CHECK(sniff_media_kind("  <!DOCTYPE html><html>", "") == MediaKind::html);
    CHECK(sniff_media_kind("plain words", "text/html; charset=utf-8") == MediaKind::html);
    CHECK_FALSE(sniff_media_kind("\x89PNG", "image/png"));
}

TEST_CASE("BFS over the fixture graph stops at depth 2") {
    FakeFetcher f;
    f.page("http://site/A", html_linking({"/B", "/C"}));
    f.page("http://site/B", html_linking({"/D"}));
    f.page("http://site/C", html_linking({"/D", "/E"}));
    f.page("http://site/D", html_linking({"/F"}));
    f.page("http://site/E", html_linking({}));
    f.page("http://site/F", html_linking({}));
    const auto r = crawl({"http://site/A"}, fast_policy(2), f);
    CHECK(urls_of(r) == std::set<std::string>{"http://site/A", "http://site/B", "http://site/C", "http://site/D",
                                              "http://site/E"});
    REQUIRE(r.documents.size() == 5);
    CHECK(r.documents[0].url == "http://site/A");
    CHECK(r.documents[1].url == "http://site/B");
    CHECK(r.documents[2].url == "http://site/C");
    CHECK(r.documents[3].depth == 2);
    CHECK(r.documents[3].referrer == "http://site/B");
    const auto reqs = f.requests();
    CHECK(std::find(reqs.begin(), reqs.end(), "http://site/F") == reqs.end());
}

TEST_CASE("depth 0 fetches only the seed") {
    FakeFetcher f;
    f.page("http://site/A", html_linking({"/B"}));
    f.page("http://site/B", html_linking({}));
    const auto r = crawl({"http://site/A"}, fast_policy(0), f);
    REQUIRE(r.documents.size() == 1);
    CHECK(r.documents[0].url == "http://site/A");
    CHECK(r.documents[0].seed_origin == "http://site/A");
}

TEST_CASE("unreachable seed is recorded and the crawl continues") {
    FakeFetcher f;
    f.fail("http://down/", 0);
    f.page("http://up/", html_linking({"/gone"}));
    const auto r = crawl({"http://down/", "http://up/"}, fast_policy(2), f);
    REQUIRE(r.documents.size() == 1);
    CHECK(r.documents[0].url == "http://up/");
    REQUIRE(r.failures.size() == 2);
    CHECK(r.failures[0].url == "http://down/");
    CHECK(r.failures[0].status == 0);
    CHECK(r.failures[1].url == "http://up/gone");
    CHECK(r.failures[1].status == 404);
}

TEST_CASE("max_pages stops cleanly with partial results") {
    FakeFetcher f;
    std::vector<std::string> kids;
    for (int i = 0; i < 10; ++i) {
        kids.push_back("/p" + std::to_string(i));
        f.page("http://site/p" + std::to_string(i), html_linking({}));
    }
    f.page("http://site/", html_linking(kids));
    auto policy = fast_policy(2);
    policy.max_pages = 4;
    const auto r = crawl({"http://site/"}, policy, f);
    CHECK(r.documents.size() == 4);
    CHECK(r.hit_page_limit);
    CHECK(r.documents[1].url == "http://site/p0");
    CHECK(r.documents[3].url == "http://site/p2");
}

TEST_CASE("policy and seed validation") {
    FakeFetcher f;
    auto p = fast_policy(-1);
    CHECK_THROWS_AS(crawl({"http://x/"}, p, f), ValidationError);
    p = fast_policy(1);
    p.max_pages = 0;
    CHECK_THROWS_AS(crawl({"http://x/"}, p, f), ValidationError);
    CHECK_THROWS_AS(crawl({"/relative"}, fast_policy(1), f), ValidationError);
    CHECK_THROWS_AS(crawl({"ftp://x/"}, fast_policy(1), f), ValidationError);
}

TEST_CASE("BFS frontier property on random graphs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 25);
        std::vector<std::vector<int>> adj(n);
        FakeFetcher f;
        for (int i = 0; i < n; ++i) {
            const int deg = static_cast<int>(rng() % 4);
            std::vector<std::string> hrefs;
            for (int e = 0; e < deg; ++e) {
                const int j = static_cast<int>(rng() % n);
                adj[i].push_back(j);
                hrefs.push_back("/n" + std::to_string(j));
            }
            if (rng() % 10 == 0) {
                f.fail("http://g/n" + std::to_string(i), 500);
            } else {
                f.page("http://g/n" + std::to_string(i), html_linking(hrefs));
            }
        }
        const int depth = static_cast<int>(rng() % 4);
        const auto r = crawl({"http://g/n0"}, fast_policy(depth), f);

        // Oracle: plain BFS distances over the successfully served pages.
        std::map<std::string, int> dist;
        std::set<std::string> urls;
        for (const auto& d : r.documents) {
            CHECK(d.depth <= depth);
            CHECK(urls.insert(d.url).second);
            dist[d.url] = d.depth;
        }
        std::map<std::string, std::set<std::string>> links_from;
        for (const auto& d : r.documents) {
            for (const auto& l : extract_links(d.body, d.url)) links_from[d.url].insert(l);
        }
        for (const auto& d : r.documents) {
            if (d.depth == 0) continue;
            REQUIRE(dist.count(d.referrer));
            CHECK(dist[d.referrer] == d.depth - 1);
            CHECK(links_from[d.referrer].count(d.url) == 1);
        }
        for (std::size_t i = 1; i < r.documents.size(); ++i) {
            CHECK(r.documents[i - 1].depth <= r.documents[i].depth);
        }
    }
}

TEST_CASE("politeness gate spaces starts per host") {
    PolitenessGate gate(std::chrono::milliseconds(30));
    std::vector<std::jthread> ts;
    for (int i = 0; i < 6; ++i) {
        ts.emplace_back([&, i] { gate.acquire(i % 2 ? "a" : "b"); });
    }
    ts.clear();
    std::map<std::string, std::vector<std::chrono::steady_clock::time_point>> by_host;
    for (const auto& [h, t] : gate.log()) by_host[h].push_back(t);
    for (auto& [h, times] : by_host) {
        std::sort(times.begin(), times.end());
        CHECK(times.size() == 3);
        for (std::size_t i = 1; i < times.size(); ++i) {
            CHECK(times[i] - times[i - 1] >= std::chrono::milliseconds(30));
        }
    }
}

TEST_CASE("crawl honours per-host delay with several workers") {
    FakeFetcher f;
    std::vector<std::string> kids;
    for (int i = 0; i < 6; ++i) {
        kids.push_back("/k" + std::to_string(i));
        f.page("http://site/k" + std::to_string(i), html_linking({}));
    }
    f.page("http://site/", html_linking(kids));
    auto p = fast_policy(1);
    p.per_host_delay = std::chrono::milliseconds(20);
    p.workers = 4;
    const auto r = crawl({"http://site/"}, p, f);
    CHECK(r.documents.size() == 7);
    std::vector<std::chrono::steady_clock::time_point> starts;
    for (const auto& [h, t] : r.request_log) {
        if (h == "site") starts.push_back(t);
    }
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 1; i < starts.size(); ++i) {
        CHECK(starts[i] - starts[i - 1] >= std::chrono::milliseconds(20));
    }
}

TEST_CASE("robots rules") {
    const auto rules = RobotsRules::parse(
        "User-agent: other\nDisallow: /\n\nUser-agent: *\nDisallow: /private\nAllow: /private/open\n"
        "Disallow: /*.cgi$\n",
        "ragqa-crawler/1.0");
    CHECK(rules.allowed("/"));
    CHECK_FALSE(rules.allowed("/private/x"));
    CHECK(rules.allowed("/private/open/y"));
    CHECK_FALSE(rules.allowed("/bin/run.cgi"));
    CHECK(rules.allowed("/bin/run.cgi?x=1"));

    const auto own = RobotsRules::parse("User-agent: *\nDisallow:\n\nUser-agent: ragqa-crawler\nDisallow: /\n",
                                        "ragqa-crawler/1.0");
    CHECK_FALSE(own.allowed("/anything"));
    CHECK(RobotsRules::allow_all().allowed("/x"));
}

TEST_CASE("crawl skips robots-blocked pages") {
    FakeFetcher f;
    f.page("http://site/robots.txt", "User-agent: *\nDisallow: /secret\n", "text/plain");
    f.page("http://site/", html_linking({"/secret", "/open"}));
    f.page("http://site/secret", html_linking({}));
    f.page("http://site/open", html_linking({}));
    auto p = fast_policy(1);
    p.respect_robots = true;
    const auto r = crawl({"http://site/"}, p, f);
    CHECK(urls_of(r) == std::set<std::string>{"http://site/", "http://site/open"});
    CHECK(r.robots_blocked == std::vector<std::string>{"http://site/secret"});
}

TEST_CASE("seed file parsing") {
    const auto seeds = parse_seed_file("# seeds\nhttp://a/\n\n  https://b/x  \n#http://c/\n");
    CHECK(seeds == std::vector<std::string>{"http://a/", "https://b/x"});
}

TEST_CASE("store_raw naming") {
    testing::TempDir root;
    const auto rel = store_raw(html_doc("http://x/a/b"), root.path());
    CHECK(rel.generic_string() == "html/x/a/b.html");
    CHECK(fs::exists(root / "html/x/a/b.html"));
    const json meta = json::parse(io::read_file(root / "html/x/a/b.meta.json"));
    CHECK(meta["url"] == "http://x/a/b");
    CHECK(meta["depth"] == 1);
    CHECK(meta["seed_origin"] == "http://x/");
    CHECK(meta.contains("fetched_at"));

    RawDocument paper = html_doc("https://arxiv.example/pdf/a1f0c3.pdf", "%PDF-1.4");
    paper.media_kind = MediaKind::pdf;
    paper.paper_id = "a1f0c3";
    CHECK(store_raw(paper, root.path()).generic_string() == "paper/a1f0c3.pdf");

    RawDocument web_pdf = html_doc("http://x/docs/guide.pdf", "%PDF-1.4");
    web_pdf.media_kind = MediaKind::pdf;
    CHECK(store_raw(web_pdf, root.path()).generic_string() == "pdf/x/docs/guide.pdf");

    CHECK(storage_name(html_doc("http://x/")).generic_string() == "html/x/index.html");
    CHECK(storage_name(html_doc("http://x/dir/")).generic_string() == "html/x/dir/index.html");
    CHECK(storage_name(html_doc("http://x/a%20b/c d")).generic_string() == "html/x/a%2520b/c%20d.html");
    CHECK(storage_name(html_doc("http://x:8080/p?q=1")).generic_string() == "html/x%3A8080/p%3Fq%3D1.html");
}

TEST_CASE("store_raw collision suffix and overwrite") {
    testing::TempDir root;
    CHECK(store_raw(html_doc("http://x/a/b"), root.path()).generic_string() == "html/x/a/b.html");
    // Same storage name, different URL.
    CHECK(store_raw(html_doc("http://x/a/b.html"), root.path()).generic_string() == "html/x/a/b-1.html");
    CHECK(store_raw(html_doc("http://x/a/b.htm"), root.path()).generic_string() == "html/x/a/b-2.html");
    // Same URL again overwrites in place.
    CHECK(store_raw(html_doc("http://x/a/b.html", "<p>new</p>"), root.path()).generic_string() ==
          "html/x/a/b-1.html");
    CHECK(io::read_file(root / "html/x/a/b-1.html") == "<p>new</p>");
}

TEST_CASE("store_raw reports the failing path") {
    testing::TempDir root;
    io::write_file(root / "html", "a file where a directory should be");
    try {
        store_raw(html_doc("http://x/a"), root.path());
        FAIL("expected StorageError");
    } catch (const StorageError& e) {
        CHECK(e.path().find("html") != std::string::npos);
    }
}

TEST_CASE("load_raw_corpus round trip") {
    testing::TempDir root;
    store_raw(html_doc("http://x/a", "<p>A</p>"), root.path());
    RawDocument paper = html_doc("https://p/1.pdf", "%PDF-1.4");
    paper.media_kind = MediaKind::pdf;
    paper.paper_id = "p1";
    store_raw(paper, root.path());
    const auto items = load_raw_corpus(root.path());
    REQUIRE(items.size() == 2);
    CHECK(items[0].relative_path.generic_string() == "html/x/a.html");
    CHECK(items[0].doc.body == "<p>A</p>");
    CHECK(items[1].category == Category::paper);
    CHECK(items[1].doc.paper_id == "p1");
}

namespace {

const std::string kApi = "https://api.test/graph/v1";

std::string fixture(const std::string& name) { return io::read_file(testing::fixture_dir() / "scholar" / name); }

void load_scholar(FakeFetcher& f) {
    const std::string fields = "/papers?fields=paperId,title,year,isOpenAccess,openAccessPdf&limit=1000";
    f.page(kApi + "/author/search?query=Graham%20Neubig&fields=name", fixture("search_graham_neubig.json"), "application/json");
    f.page(kApi + "/author/search?query=Emma%20Strubell&fields=name", fixture("search_emma_strubell.json"), "application/json");
    f.page(kApi + "/author/search?query=Quiet%20Author&fields=name", fixture("search_quiet_author.json"), "application/json");
    f.page(kApi + "/author/1700325" + fields, fixture("papers_1700325.json"), "application/json");
    f.page(kApi + "/author/2268272" + fields, fixture("papers_2268272.json"), "application/json");
    f.page(kApi + "/author/3300001" + fields, fixture("papers_3300001.json"), "application/json");
    for (const char* id : {"a1f0c3", "b27e91", "g7c210", "e5a001", "h8d999"}) {
        f.page(std::string("https://arxiv.example/pdf/") + id + ".pdf", std::string("%PDF-1.4 ") + id,
               "application/pdf");
    }
    f.page("https://publisher.example/landing/d48812", "<html><body>landing</body></html>");
}

ScholarClientOptions fast_options(std::vector<std::chrono::milliseconds>* slept = nullptr) {
    ScholarClientOptions o;
    o.base_url = kApi;
    o.initial_backoff = std::chrono::milliseconds(100);
    o.max_backoff = std::chrono::milliseconds(300);
    o.sleep = [slept](std::chrono::milliseconds d) {
        if (slept) slept->push_back(d);
    };
    return o;
}

}  // namespace

TEST_CASE("fetch_papers from recorded responses") {
    FakeFetcher f;
    load_scholar(f);
    ScholarQuery q;
    q.author_names = {"Graham Neubig", "Emma Strubell"};
    q.year = 2023;
    const auto r = fetch_papers(q, fast_options(), f);
    REQUIRE(r.documents.size() == 3);
    CHECK(r.documents[0].paper_id == "a1f0c3");
    CHECK(r.documents[1].paper_id == "b27e91");
    CHECK(r.documents[2].paper_id == "g7c210");
    for (const auto& d : r.documents) {
        CHECK(d.media_kind == MediaKind::pdf);
        CHECK(d.seed_origin.rfind(kApi + "/author/", 0) == 0);
        CHECK(category_of(d) == Category::paper);
    }
    REQUIRE(r.skipped.size() == 2);
    CHECK(r.skipped[0].paper_id == "c3d442");
    CHECK(r.skipped[0].reason == "no_open_access");
    CHECK(r.skipped[1].paper_id == "d48812");
    CHECK(r.skipped[1].reason == "not_pdf");
    CHECK(r.errors.empty());
    // The exact name match wins over the looser second hit.
    const auto reqs = f.requests();
    CHECK(std::none_of(reqs.begin(), reqs.end(), [](const std::string& u) { return u.find("2081234") != std::string::npos; }));
}

TEST_CASE("author with no papers that year gives an empty result") {
    FakeFetcher f;
    load_scholar(f);
    ScholarQuery q;
    q.author_names = {"Quiet Author"};
    const auto r = fetch_papers(q, fast_options(), f);
    CHECK(r.documents.empty());
    CHECK(r.errors.empty());
    CHECK(r.skipped.empty());
}

TEST_CASE("empty author list is rejected") {
    FakeFetcher f;
    ScholarQuery q;
    CHECK_THROWS_AS(fetch_papers(q, fast_options(), f), ValidationError);
    q.author_names = {"A"};
    q.year = 23;
    CHECK_THROWS_AS(fetch_papers(q, fast_options(), f), ValidationError);
}

TEST_CASE("rate limiting backs off exponentially then succeeds") {
    FakeFetcher f;
    load_scholar(f);
    const std::string search = kApi + "/author/search?query=Emma%20Strubell&fields=name";
    for (int i = 0; i < 3; ++i) f.queue(search, FetchResult{429, "slow down", "text/plain", {}});
    std::vector<std::chrono::milliseconds> slept;
    ScholarQuery q;
    q.author_names = {"Emma Strubell"};
    const auto r = fetch_papers(q, fast_options(&slept), f);
    CHECK(r.documents.size() == 2);
    CHECK(slept == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100), std::chrono::milliseconds(200),
                                                          std::chrono::milliseconds(300)});
    CHECK(r.backoffs == slept);
}

TEST_CASE("retry cap turns persistent rate limiting into an author error") {
    FakeFetcher f;
    load_scholar(f);
    const std::string search = kApi + "/author/search?query=Emma%20Strubell&fields=name";
    for (int i = 0; i < 10; ++i) f.queue(search, FetchResult{429, "", "", {}});
    auto opts = fast_options();
    opts.max_retries = 2;
    ScholarQuery q;
    q.author_names = {"Emma Strubell", "Quiet Author"};
    const auto r = fetch_papers(q, opts, f);
    CHECK(r.documents.empty());
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].find("Emma Strubell") == 0);
    CHECK(r.backoffs.size() == 2);
}

TEST_CASE("author file parsing") {
    CHECK(parse_author_file("Graham Neubig\n# comment\n\n Emma Strubell \n") ==
          std::vector<std::string>{"Graham Neubig", "Emma Strubell"});
}

TEST_CASE("crawl of the local fixture site") {
    testing::LocalServer server;
    server.mount(testing::fixture_dir() / "site");
    server.start();

    auto policy = fast_policy(2);
    policy.respect_robots = true;  // no robots.txt: everything allowed
    HttpFetcher fetcher(std::chrono::milliseconds(5000), policy.user_agent);
    const auto r = crawl({server.url("/index.html")}, policy, fetcher);

    std::set<std::string> got;
    for (const auto& d : r.documents) got.insert(d.url.substr(server.url("/").size()));
    const std::set<std::string> want{"index.html", "about.html",    "programs.html", "news.html",
                                     "people.html", "junk_short.html", "history.html", "campus.html",
                                     "mlt.html",    "phd.html",      "catalog.pdf",  "carnival.html",
                                     "notfound_page.html", "stanford.html", "faculty.html"};
    CHECK(got == want);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].url == server.url("/missing.html"));
    CHECK(r.failures[0].status == 404);

    // Re-crawl and store twice: identical layout and bodies.
    testing::TempDir a;
    testing::TempDir b;
    for (const auto& d : r.documents) store_raw(d, a.path());
    const auto again = crawl({server.url("/index.html")}, policy, fetcher);
    for (const auto& d : again.documents) store_raw(d, b.path());
    std::vector<std::string> la;
    std::vector<std::string> lb;
    for (const auto& e : fs::recursive_directory_iterator(a.path())) {
        if (e.is_regular_file() && !e.path().string().ends_with(".meta.json")) {
            la.push_back(fs::relative(e.path(), a.path()).generic_string() + "=" + io::read_file(e.path()));
        }
    }
    for (const auto& e : fs::recursive_directory_iterator(b.path())) {
        if (e.is_regular_file() && !e.path().string().ends_with(".meta.json")) {
            lb.push_back(fs::relative(e.path(), b.path()).generic_string() + "=" + io::read_file(e.path()));
        }
    }
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    CHECK(la.size() == 15);
    CHECK(la == lb);
}
