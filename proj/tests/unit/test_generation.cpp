#include <doctest.h>

#include <atomic>
#include <random>

#include "fixture_server.hpp"
#include "synthetic.hpp"
#include "ragqa/annotation/annotate.hpp"
#include "ragqa/chunking/chunker.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/generation/qa_chain.hpp"
#include "ragqa/generation/qa_prompt.hpp"
#include "ragqa/providers/mock.hpp"
#include "ragqa/retrieval/vector_index.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

using namespace ragqa;
using namespace ragqa::generation;

namespace {

const QAPromptTemplate kPlain("Question: {question}\nContext: {context}\nAnswer:");

providers::ProviderConfig mock_cfg(providers::Role role) {
    providers::ProviderConfig c;
    c.role = role;
    c.endpoint = "mock:0";
    c.model_id = "mock-" + std::string(providers::to_string(role));
    return c;
}

std::vector<chunking::Chunk> chunks_of(const std::vector<std::string>& texts) {
    std::vector<chunking::Chunk> out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        chunking::Chunk c;
        c.doc_id = "d" + std::to_string(i);
        c.chunk_id = c.doc_id + "#0";
        c.text = texts[i];
        c.source_path = "html/x/" + c.doc_id + ".html";
        c.word_count = text::split_whitespace(texts[i]).size();
        out.push_back(c);
    }
    return out;
}

// Rejects any prompt longer than `limit` bytes as a context overflow.
class TightGenerator final : public providers::GenerationProvider {
public:
    TightGenerator(std::size_t limit) : GenerationProvider(mock_cfg(providers::Role::generation)), limit_(limit) {}
    std::atomic<int> calls{0};

protected:
    std::string generate_raw(const std::string& prompt) override {
        ++calls;
        if (prompt.size() > limit_) throw providers::ContextOverflowError("too long");
        return "  fits  ";
    }

private:
    std::size_t limit_;
};

class BrokenGenerator final : public providers::GenerationProvider {
public:
    BrokenGenerator() : GenerationProvider(mock_cfg(providers::Role::generation)) {}

protected:
    std::string generate_raw(const std::string&) override { throw providers::ProviderError("gateway down", true); }
};

class CapturingGenerator final : public providers::GenerationProvider {
public:
    CapturingGenerator() : GenerationProvider(mock_cfg(providers::Role::generation)) {}
    std::string last;

protected:
    std::string generate_raw(const std::string& prompt) override {
        last = prompt;
        return "";
    }
};

struct Fixture {
    std::vector<chunking::Chunk> chunks;
    providers::MockEmbedding embed{mock_cfg(providers::Role::embedding)};
    providers::MockReranker rerank{mock_cfg(providers::Role::rerank)};
    providers::MockGenerator gen{mock_cfg(providers::Role::generation)};
    retrieval::VectorIndex index;

    explicit Fixture(std::vector<std::string> texts) : chunks(chunks_of(texts)) {
        index = retrieval::build_index(chunks, embed, 0);
    }
};

std::vector<std::string> campus_texts() {
    std::mt19937_64 rng(21);
    std::vector<std::string> texts;
    for (int i = 0; i < 40; ++i) texts.push_back(testing::random_text(rng, 40));
    texts[17] = "Xqbako xqrimu xqtezalo. Classes begin on August 26, 2024. Xqlopi xqnuve.";
    return texts;
}

}  // namespace

TEST_CASE("prompt rendering joins contexts with a blank line") {
    const auto r = render_qa_prompt("Q", {"C1", "C2"}, kPlain);
    CHECK(r.text == "Question: Q\nContext: C1\n\nC2\nAnswer:");
    CHECK(r.contexts_used == 2);
    CHECK_FALSE(r.truncated);

    const auto none = render_qa_prompt("Q", {}, kPlain);
    CHECK(none.text == "Question: Q\nContext: \nAnswer:");
    CHECK(none.contexts_used == 0);
    CHECK_THROWS_AS(render_qa_prompt("  ", {"C"}, kPlain), ValidationError);
}

TEST_CASE("default template layout") {
    const auto r = render_qa_prompt("When?", {"Now."}, QAPromptTemplate::default_template());
    CHECK(r.text.starts_with("[INST]<<SYS>> You are an assistant for question-answering tasks."));
    CHECK(r.text.find("Use 50 words maximum") != std::string::npos);
    CHECK(r.text.ends_with("Question: When? \nContext: Now. \nAnswer: [/INST]"));
}

TEST_CASE("template validation and file loading") {
    CHECK_THROWS_AS(QAPromptTemplate("only {question}"), ValidationError);
    CHECK_THROWS_AS(QAPromptTemplate("only {context}"), ValidationError);
    testing::TempDir dir;
    io::write_file(dir / "t.txt", "Q={question} C={context}\n");
    const auto t = QAPromptTemplate::from_file(dir / "t.txt");
    CHECK(t.text() == "Q={question} C={context}");
    CHECK(t.fill("{context}", "x") == "Q={context} C=x");
}

TEST_CASE("character budget drops whole contexts from the tail") {
    const std::vector<std::string> ctx{"aaaa", "bbbb", "cccc"};
    const auto full = render_qa_prompt("Q", ctx, kPlain);
    const std::size_t n = full.text.size();
    CHECK(render_qa_prompt("Q", ctx, kPlain, n).contexts_used == 3);
    const auto two = render_qa_prompt("Q", ctx, kPlain, n - 1);
    CHECK(two.contexts_used == 2);
    CHECK(two.truncated);
    CHECK(two.text == "Question: Q\nContext: aaaa\n\nbbbb\nAnswer:");
    CHECK(render_qa_prompt("Q", ctx, kPlain, 5).contexts_used == 0);
    // budget counts code points, not bytes
    const auto u = render_qa_prompt("Q", {"é"}, kPlain);
    CHECK(render_qa_prompt("Q", {"é"}, kPlain, text::utf8_length(u.text)).contexts_used == 1);
}

TEST_CASE("prompt fidelity on random inputs") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const std::string q = "q" + testing::random_text(rng, 1 + rng() % 10);
        std::vector<std::string> ctx;
        const std::size_t n = rng() % 6;
        for (std::size_t k = 0; k < n; ++k) ctx.push_back(testing::random_text(rng, 1 + rng() % 30));
        const auto a = render_qa_prompt(q, ctx, kPlain);
        CHECK(a.text == render_qa_prompt(q, ctx, kPlain).text);
        CHECK(a.text.find(q) != std::string::npos);
        std::size_t at = 0;
        for (const auto& c : ctx) {
            const auto pos = a.text.find(c, at);
            REQUIRE(pos != std::string::npos);
            at = pos + c.size();
        }
        // the baseline differs only inside the context slot
        const auto base = render_qa_prompt(q, {}, kPlain);
        const std::string head = "Question: " + q + "\nContext: ";
        CHECK(a.text.starts_with(head));
        CHECK(base.text.starts_with(head));
        CHECK(a.text.ends_with("\nAnswer:"));
        CHECK(base.text == head + "\nAnswer:");
    }
}

TEST_CASE("planted fact is answered through the chain") {
    Fixture f(campus_texts());
    QaChain chain(f.index, f.embed, &f.rerank, f.gen);
    const auto a = chain.answer("When do classes begin?");
    CHECK(a.answer.find("August 26") != std::string::npos);
    CHECK(a.used_rag);
    CHECK(a.model_id == "mock-generation");
    REQUIRE_FALSE(a.contexts.empty());
    CHECK(a.contexts.size() <= 5);
    CHECK(a.contexts.front().chunk_id == "d17#0");
    CHECK(a.answer_words == text::split_whitespace(a.answer).size());

    const auto again = chain.answer("When do classes begin?");
    CHECK(again.to_json() == a.to_json());

    const auto base = chain.answer_baseline("When do classes begin?");
    CHECK(base.answer == "I don't know.");
    CHECK_FALSE(base.used_rag);
    CHECK(base.contexts.empty());

    const auto j = a.to_json(true);
    CHECK(j.contains("timings"));
    CHECK(j["timings"]["total_ms"].get<double>() >= 0.0);
    CHECK_FALSE(a.to_json().contains("timings"));
    CHECK_THROWS_AS(chain.answer(" \n"), ValidationError);
}

TEST_CASE("chain on an empty index") {
    Fixture f({"alpha"});
    const retrieval::VectorIndex empty(f.index.dim(), "m", 0);
    QaChain chain(empty, f.embed, &f.rerank, f.gen);
    CHECK_THROWS_AS(chain.answer("anything?"), MissingArtifactError);
}

TEST_CASE("context overflow retries with fewer contexts") {
    Fixture f({"one two three four", "five six seven", "eight nine", "ten eleven", "twelve"});
    ChainOptions opts;
    opts.prompt = kPlain;
    const auto probe = render_qa_prompt("one five eight?", {"one two three four"}, kPlain).text.size();
    TightGenerator tight(probe);
    QaChain chain(f.index, f.embed, &f.rerank, tight, opts);
    const auto a = chain.answer("one five eight?");
    CHECK(a.answer == "fits");
    CHECK(a.truncated);
    CHECK(a.contexts.size() <= 1);
    CHECK(tight.calls > 1);

    TightGenerator hopeless(3);
    QaChain chain2(f.index, f.embed, &f.rerank, hopeless, opts);
    try {
        chain2.answer("one five eight?");
        FAIL("expected AnswerError");
    } catch (const AnswerError& e) {
        CHECK(e.partial().contexts.empty());
        CHECK(e.partial().truncated);
    }
}

TEST_CASE("generation failure keeps the retrieved contexts") {
    Fixture f(campus_texts());
    BrokenGenerator broken;
    QaChain chain(f.index, f.embed, &f.rerank, broken);
    try {
        chain.answer("When do classes begin?");
        FAIL("expected AnswerError");
    } catch (const AnswerError& e) {
        CHECK_FALSE(e.partial().contexts.empty());
        CHECK(e.partial().question == "When do classes begin?");
        CHECK(std::string(e.what()).find("gateway down") != std::string::npos);
    }
}

TEST_CASE("empty completion becomes a refusal and the prompt carries ranked contexts") {
    Fixture f({"red green", "green blue", "blue yellow"});
    CapturingGenerator cap;
    ChainOptions opts;
    opts.prompt = kPlain;
    QaChain chain(f.index, f.embed, &f.rerank, cap, opts);
    const auto a = chain.answer("green");
    CHECK(a.answer == "I don't know.");
    std::vector<std::string> texts;
    for (const auto& c : a.contexts) texts.push_back(c.text);
    CHECK(cap.last == render_qa_prompt("green", texts, kPlain).text);
}

TEST_CASE("fine-tuning export") {
    testing::TempDir dir;
    const auto chunks = chunks_of({"The pool opens at 6am.", "Parking is free on Sundays."});
    chunking::save_chunks(dir / "chunks.jsonl", chunks);
    std::vector<annotation::QAPair> qa{
        {"When does the pool open?", "6am", "d0#0", annotation::Split::train},
        {"Is parking free?", "On Sundays", "d1#0", annotation::Split::test},
        {"Orphan?", "yes", "gone#3", annotation::Split::train},
    };
    annotation::save_dataset(dir / "qa.jsonl", qa);
    const auto stats = export_finetune(dir / "qa.jsonl", dir / "chunks.jsonl", dir / "ft.jsonl");
    CHECK(stats.written == 2);
    CHECK(stats.missing_chunk == 1);
    const auto rows = io::read_jsonl(dir / "ft.jsonl");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["context"] == "The pool opens at 6am.");
    CHECK(rows[0]["answer"] == "6am");
    CHECK(rows[0]["chunk_id"] == "d0#0");
    const std::string t = rows[0]["text"];
    CHECK(t == render_finetune_record("When does the pool open?", "The pool opens at 6am.", "6am"));
    CHECK(t.find("Question: When does the pool open? \nContext: \nThe pool opens at 6am.\nAnswer: [/INST]\n6am") !=
          std::string::npos);
    CHECK(t.find("key points") != std::string::npos);
}
