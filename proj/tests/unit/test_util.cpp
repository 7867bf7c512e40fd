#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "fixture_server.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/util/config.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/random.hpp"
#include "ragqa/util/text.hpp"

using namespace ragqa;

TEST_CASE("trim and whitespace split") {
    CHECK(text::trim("  a b \n") == "a b");
    CHECK(text::trim("") == "");
    const auto parts = text::split_whitespace(" a\tb\n\nc  ");
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == "a");
    CHECK(parts[2] == "c");
    CHECK(text::split_whitespace("   ").empty());
}

TEST_CASE("word tokens are lowercase alphanumeric runs") {
    const auto t = text::word_tokens("Hello, World! CMU-LTI 2024");
    const std::vector<std::string> want{"hello", "world", "cmu", "lti", "2024"};
    CHECK(t == want);
    CHECK(text::word_tokens("Café") == std::vector<std::string>{"café"});
}

TEST_CASE("utf8 helpers") {
    CHECK(text::utf8_length("abc") == 3);
    CHECK(text::utf8_length("Café") == 4);
    CHECK(text::utf8_length("\xE2\x80\x94") == 1);
    bool lossy = false;
    const std::string clean = text::sanitize_utf8("ok\xFFok", lossy);
    CHECK(lossy);
    CHECK(clean == "ok\xEF\xBF\xBDok");
    lossy = false;
    CHECK(text::sanitize_utf8("plain", lossy) == "plain");
    CHECK_FALSE(lossy);
    CHECK(text::utf8_prefix_bytes("Café!", 4) == 5);
    CHECK(text::utf8_prefix_bytes("ab", 10) == 2);
    std::string s;
    text::append_utf8(s, U'é');
    CHECK(s == "é");
}

TEST_CASE("fnv1a64 matches published vectors") {
    CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(text::fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(text::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("percent encoding keeps the unreserved set") {
    CHECK(text::percent_encode("a b/c~d") == "a%20b%2Fc~d");
    CHECK(text::percent_encode("Graham Neubig") == "Graham%20Neubig");
}

TEST_CASE("config file parsing") {
    const auto cfg = ConfigFile::parse(R"(
# comment
top = 1
[providers]
embed_url = "http://localhost:9000"   # trailing comment
gen_url = 'mock:3'
timeout_ms = 5000
flag = true
hash = "a#b"
)");
    CHECK(cfg.get("top") == "1");
    CHECK(cfg.get("providers.embed_url") == "http://localhost:9000");
    CHECK(cfg.get("providers.gen_url") == "mock:3");
    CHECK(cfg.get("providers.timeout_ms") == "5000");
    CHECK(cfg.get("providers.flag") == "true");
    CHECK(cfg.get("providers.hash") == "a#b");
    CHECK_FALSE(cfg.get("providers.missing"));
    CHECK_THROWS_AS(ConfigFile::parse("[broken\n"), ValidationError);
    CHECK_THROWS_AS(ConfigFile::parse("novalue\n"), ValidationError);
    CHECK_THROWS_AS(ConfigFile::parse("k = \"open\n"), ValidationError);
}

TEST_CASE("setting precedence is flag, env, file, fallback") {
    ConfigFile cfg;
    cfg.set("providers.embed_url", "from-file");
    ::unsetenv("RAGQA_TEST_ENV");
    CHECK(resolve_setting(std::string("from-flag"), "RAGQA_TEST_ENV", cfg, "providers.embed_url", "fb") == "from-flag");
    CHECK(resolve_setting(std::nullopt, "RAGQA_TEST_ENV", cfg, "providers.embed_url", "fb") == "from-file");
    ::setenv("RAGQA_TEST_ENV", "from-env", 1);
    CHECK(resolve_setting(std::nullopt, "RAGQA_TEST_ENV", cfg, "providers.embed_url", "fb") == "from-env");
    ::unsetenv("RAGQA_TEST_ENV");
    CHECK(resolve_setting(std::nullopt, "RAGQA_TEST_ENV", ConfigFile{}, "providers.embed_url", "fb") == "fb");
}

TEST_CASE("jsonl round trip and error line") {
    testing::TempDir dir;
    const auto p = dir / "x.jsonl";
    io::write_jsonl(p, {json{{"a", 1}}, json{{"b", "two"}}});
    const auto back = io::read_jsonl(p);
    REQUIRE(back.size() == 2);
    CHECK(back[1]["b"] == "two");
    io::write_file(p, "{\"a\":1}\n\nnot json\n");
    try {
        io::read_jsonl(p);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    CHECK_THROWS_AS(io::read_file(dir / "absent"), MissingArtifactError);
}

TEST_CASE("dump_pretty sorts keys") {
    json j;
    j["b"] = 1;
    j["a"] = 2;
    const auto s = io::dump_pretty(j);
    CHECK(s.find("\"a\"") < s.find("\"b\""));
}

TEST_CASE("rfc3339 formatting") {
    const auto tp = std::chrono::system_clock::time_point(std::chrono::seconds(1724681100));
    CHECK(io::rfc3339(tp) == "2024-08-26T14:05:00Z");
}

TEST_CASE("deterministic shuffle is a seeded permutation") {
    std::mt19937_64 meta(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = meta() % 50;
        std::vector<int> a(n);
        std::iota(a.begin(), a.end(), 0);
        auto b = a;
        const auto seed = meta();
        deterministic_shuffle(std::span<int>(a), seed);
        deterministic_shuffle(std::span<int>(b), seed);
        CHECK(a == b);
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> want(n);
        std::iota(want.begin(), want.end(), 0);
        CHECK(sorted == want);
    }
}

TEST_CASE("different seeds give different orders") {
    std::vector<int> a{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    deterministic_shuffle(std::span<int>(a), 42);
    auto b = std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    deterministic_shuffle(std::span<int>(b), 43);
    CHECK(a != b);
}
