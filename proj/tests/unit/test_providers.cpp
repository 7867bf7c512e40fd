#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "fixture_server.hpp"
#include "oracles.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/providers/http_providers.hpp"
#include "ragqa/providers/mock.hpp"
#include "ragqa/providers/provider.hpp"
#include "ragqa/util/config.hpp"
#include "ragqa/util/text.hpp"

using namespace ragqa;
using namespace ragqa::providers;

namespace {

double norm(const Embedding& v) {
    double s = 0;
    for (const float x : v) s += static_cast<double>(x) * x;
    return std::sqrt(s);
}

ProviderConfig mock_cfg(Role role, const std::string& endpoint = "mock:0") {
    ProviderConfig c;
    c.role = role;
    c.endpoint = endpoint;
    return c;
}

bool distinct_buckets(const std::vector<std::string>& toks, std::size_t dim, std::uint64_t seed) {
    std::set<std::size_t> b;
    for (const auto& t : toks) b.insert(mock_bucket(t, dim, seed));
    return b.size() == toks.size();
}

}  // namespace

TEST_CASE("mock embeddings") {
    MockEmbedding e(mock_cfg(Role::embedding));
    const auto same = e.embed_batch({"a", "a"});
    CHECK(same[0] == same[1]);
    CHECK(e.dim() == 512);

    const auto v = e.embed_batch({"cat sat", "cat sat", "dog ran"});
    CHECK(testing::oracle::cosine(v[0], v[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(testing::oracle::cosine(v[0], v[2]) < testing::oracle::cosine(v[0], v[1]));

    REQUIRE(distinct_buckets({"a", "b", "c"}, 512, 0));
    const auto ab = mock_embed("a b", 512, 0);
    const auto ac = mock_embed("a c", 512, 0);
    CHECK(testing::oracle::cosine(ab, ac) == doctest::Approx(0.5).epsilon(1e-9));

    REQUIRE(distinct_buckets({"alpha", "beta", "gamma", "delta"}, 512, 0));
    CHECK(testing::oracle::cosine(mock_embed("alpha beta", 512, 0), mock_embed("gamma delta", 512, 0)) == 0.0);
    CHECK(testing::oracle::cosine(mock_embed("Same Text", 512, 0), mock_embed("same text!", 512, 0)) ==
          doctest::Approx(1.0));
}

TEST_CASE("mock embedding contracts") {
    CHECK_THROWS_AS(mock_embed("x", 7, 0), ValidationError);
    CHECK(norm(mock_embed("", 16, 0)) == doctest::Approx(1.0).epsilon(1e-6));
    // Different seeds move tokens to different buckets.
    CHECK(mock_embed("some words here", 512, 1) != mock_embed("some words here", 512, 2));
    // Pure function of (input, seed).
    CHECK(mock_embed("repeatable input", 64, 9) == mock_embed("repeatable input", 64, 9));
    MockEmbedding e(mock_cfg(Role::embedding));
    CHECK_THROWS_AS(e.embed_batch({}), ValidationError);
    CHECK_THROWS_AS(e.embed_batch({"ok", ""}), ValidationError);
}

TEST_CASE("every embedding is unit length") {
    std::mt19937_64 rng(4);
    MockEmbedding e(mock_cfg(Role::embedding, "mock:5"));
    std::vector<std::string> texts;
    for (int i = 0; i < 200; ++i) texts.push_back("t" + std::to_string(rng() % 50) + " w" + std::to_string(rng() % 9));
    for (const auto& v : e.embed_batch(texts)) CHECK(std::abs(norm(v) - 1.0) <= 1e-6);
}

TEST_CASE("mock reranker") {
    MockReranker r(mock_cfg(Role::rerank));
    CHECK(r.score_pairs("q", {"x"}).size() == 1);
    const auto s = r.score_pairs("when does class start", {"class does start when", "nothing relevant", "class does start when"});
    CHECK(s[0] > s[1]);
    CHECK(s[0] == s[2]);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 0.0);
    CHECK_THROWS_AS(r.score_pairs("q", {}), ValidationError);
}

TEST_CASE("mock generator") {
    MockGenerator g(mock_cfg(Role::generation));
    CHECK(g.generate("Question: When does fall start? Context: Lunch is at noon. Fall classes start on August 26. "
                     "The library opens early. Answer:") == "Fall classes start on August 26.");
    CHECK(g.generate("Question: anything Context: Answer:") == kRefusal);
    CHECK(g.generate("Question: zebra Context: Nothing overlaps here. Answer:") == kRefusal);
    const std::string p = "Question: a b Context: a x. b y. a b z. Answer:";
    CHECK(g.generate(p) == g.generate(p));
    CHECK(g.generate(p) == "a b z.");
    CHECK_THROWS_AS(g.generate(""), ValidationError);
}

TEST_CASE("sentence splitting") {
    CHECK(split_sentences("One. Two!  Three?\nFour") == std::vector<std::string>{"One.", "Two!", "Three?", "Four"});
    CHECK(split_sentences("v1.2 stays whole.") == std::vector<std::string>{"v1.2 stays whole."});
    CHECK(split_sentences("").empty());
}

TEST_CASE("config validation and mock seeds") {
    auto c = mock_cfg(Role::embedding, "mock");
    CHECK(c.is_mock());
    CHECK(c.mock_seed() == 0);
    c.endpoint = "mock:42";
    CHECK(c.mock_seed() == 42);
    c.endpoint = "mock:x";
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.endpoint = "ftp://host";
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.endpoint = "http://host";
    c.max_batch = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.max_batch = 1;
    c.temperature = -1;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("provider resolution precedence") {
    ConfigFile file = ConfigFile::parse("[providers]\nembed_url = \"mock:7\"\ngen_url = \"http://gen:1\"\n");
    ::unsetenv("RAG_EMBED_URL");
    ::unsetenv("RAG_GEN_URL");
    ::unsetenv("RAG_RERANK_URL");
    ProviderOverrides flags;
    CHECK(resolve_config(Role::embedding, flags, file).endpoint == "mock:7");
    CHECK(resolve_config(Role::rerank, flags, file).endpoint == "mock:0");
    CHECK(resolve_config(Role::generation, flags, file).endpoint == "http://gen:1");
    ::setenv("RAG_EMBED_URL", "mock:8", 1);
    CHECK(resolve_config(Role::embedding, flags, file).endpoint == "mock:8");
    flags.embed_url = "mock:9";
    CHECK(resolve_config(Role::embedding, flags, file).endpoint == "mock:9");
    ::unsetenv("RAG_EMBED_URL");
    CHECK(resolve_config(Role::embedding, {}, file).model_id == kDefaultEmbedModel);
    CHECK(resolve_config(Role::rerank, {}, file).model_id == kDefaultRerankModel);
}

namespace {

// Fake model server speaking the wire protocol.
struct FakeModelServer {
    testing::LocalServer server;
    std::atomic<int> embed_calls{0};
    std::atomic<int> fail_next{0};
    std::atomic<int> dim{4};
    std::vector<std::size_t> batch_sizes;
    std::mutex mu;

    FakeModelServer() {
        auto& s = server.routes();
        s.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
            ++embed_calls;
            if (fail_next > 0) {
                --fail_next;
                res.status = 503;
                return;
            }
            const auto body = json::parse(req.body);
            json vectors = json::array();
            {
                std::lock_guard lock(mu);
                batch_sizes.push_back(body["texts"].size());
            }
            for (const auto& t : body["texts"]) {
                json v = json::array();
                const std::string text = t.get<std::string>();
                for (int i = 0; i < dim; ++i) v.push_back(static_cast<double>(text.size() + i));  // not normalized
                vectors.push_back(v);
            }
            res.set_content(json{{"vectors", vectors}, {"dim", dim.load()}}.dump(), "application/json");
        });
        s.Post("/rerank", [](const httplib::Request& req, httplib::Response& res) {
            const auto body = json::parse(req.body);
            json scores = json::array();
            for (const auto& d : body["documents"]) scores.push_back(static_cast<double>(d.get<std::string>().size()));
            res.set_content(json{{"scores", scores}}.dump(), "application/json");
        });
        s.Post("/generate", [](const httplib::Request& req, httplib::Response& res) {
            const auto body = json::parse(req.body);
            const std::string prompt = body["prompt"];
            if (prompt.size() > 100) {
                res.status = 413;
                res.set_content("prompt too long", "text/plain");
                return;
            }
            if (prompt == "bad request") {
                res.status = 400;
                res.set_content("missing field", "text/plain");
                return;
            }
            if (prompt == "ctx") {
                res.status = 400;
                res.set_content("This model's maximum context length is 4096 tokens", "text/plain");
                return;
            }
            res.set_content(json{{"text", "  echo:" + prompt + " t=" + body["temperature"].dump() + "  "}}.dump(),
                            "application/json");
        });
        server.start();
    }

    ProviderConfig cfg(Role role) {
        ProviderConfig c;
        c.role = role;
        c.endpoint = server.url("");
        c.timeout = std::chrono::milliseconds(5000);
        c.retries = 2;
        return c;
    }
};

}  // namespace

TEST_CASE("http embedding batches, normalizes and keeps order") {
    FakeModelServer fake;
    auto cfg = fake.cfg(Role::embedding);
    cfg.max_batch = 3;
    HttpEmbedding e(cfg);
    std::vector<std::string> texts;
    for (int i = 1; i <= 7; ++i) texts.push_back(std::string(static_cast<std::size_t>(i), 'x'));
    const auto vs = e.embed_batch(texts);
    REQUIRE(vs.size() == 7);
    CHECK(fake.batch_sizes == std::vector<std::size_t>{3, 3, 1});
    CHECK(e.dim() == 4);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        CHECK(std::abs(norm(vs[i]) - 1.0) <= 1e-6);
        const double len = static_cast<double>(i + 1);
        const double n = std::sqrt(len * len + (len + 1) * (len + 1) + (len + 2) * (len + 2) + (len + 3) * (len + 3));
        CHECK(vs[i][0] == doctest::Approx(len / n).epsilon(1e-6));
    }
}

TEST_CASE("http embedding retries 5xx and rejects a dimension change") {
    FakeModelServer fake;
    HttpEmbedding e(fake.cfg(Role::embedding));
    fake.fail_next = 1;
    CHECK(e.embed_batch({"a"}).size() == 1);
    CHECK(fake.embed_calls == 2);

    fake.dim = 5;
    CHECK_THROWS_AS(e.embed_batch({"a"}), ProviderError);

    fake.fail_next = 10;
    try {
        HttpEmbedding e2(fake.cfg(Role::embedding));
        e2.embed_batch({"a"});
        FAIL("expected ProviderError");
    } catch (const ProviderError& err) {
        CHECK(err.retryable());
    }
}

TEST_CASE("http reranker and generator") {
    FakeModelServer fake;
    HttpReranker r(fake.cfg(Role::rerank));
    CHECK(r.score_pairs("q", {"aa", "a", "aaa"}) == std::vector<double>{2, 1, 3});

    auto gcfg = fake.cfg(Role::generation);
    gcfg.temperature = 0;
    HttpGenerator g(gcfg);
    CHECK(text::trim(g.generate("hi")) == "echo:hi t=0.0");
    CHECK(g.generate("hi") == g.generate("hi"));
    CHECK_THROWS_AS(g.generate(std::string(200, 'p')), ContextOverflowError);
    CHECK_THROWS_AS(g.generate("ctx"), ContextOverflowError);
    try {
        g.generate("bad request");
        FAIL("expected ProviderError");
    } catch (const ContextOverflowError&) {
        FAIL("plain 400 is not an overflow");
    } catch (const ProviderError& err) {
        CHECK_FALSE(err.retryable());
    }
}

TEST_CASE("unreachable endpoint is a retryable provider error") {
    ProviderConfig c;
    c.role = Role::embedding;
    c.endpoint = "http://127.0.0.1:1";
    c.retries = 0;
    c.timeout = std::chrono::milliseconds(500);
    HttpEmbedding e(c);
    try {
        e.embed_batch({"x"});
        FAIL("expected ProviderError");
    } catch (const ProviderError& err) {
        CHECK(err.retryable());
    }
}

TEST_CASE("normalize rejects zero vectors") {
    Embedding z(4, 0.0f);
    CHECK_THROWS_AS(normalize(z), ProviderError);
    Embedding v{3, 4};
    normalize(v);
    CHECK(v[0] == doctest::Approx(0.6));
}

TEST_CASE("provider set describes its models") {
    const auto set = make_provider_set({}, ConfigFile{});
    const auto d = set.describe();
    CHECK(d.is_object());
    CHECK(set.embed);
    CHECK(set.rerank);
    CHECK(set.generate);
    CHECK(set.eval_embed);
}
