#include "ragqa/generation/qa_chain.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <unordered_map>

#include "ragqa/annotation/annotate.hpp"
#include "ragqa/chunking/chunker.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/providers/mock.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::generation {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

json SystemAnswer::to_json(bool with_timings) const {
    json ctx = json::array();
    for (const auto& c : contexts) ctx.push_back(c.to_json());
    json j{{"question", question},
           {"answer", answer},
           {"contexts", ctx},
           {"used_rag", used_rag},
           {"model_id", model_id},
           {"truncated", truncated},
           {"rerank_degraded", rerank_degraded},
           {"answer_words", answer_words}};
    if (!warning.empty()) j["warning"] = warning;
    if (with_timings) {
        j["timings"] = {{"embed_ms", timings.embed_ms},
                        {"search_ms", timings.search_ms},
                        {"rerank_ms", timings.rerank_ms},
                        {"generate_ms", timings.generate_ms},
                        {"total_ms", timings.total_ms}};
    }
    return j;
}

QaChain::QaChain(const retrieval::VectorIndex& index, providers::EmbeddingProvider& embed,
                 providers::RerankProvider* rerank, providers::GenerationProvider& generate, ChainOptions options)
    : index_(index), embed_(embed), rerank_(rerank), generate_(generate), options_(std::move(options)) {
    options_.retrieve.validate();
}

SystemAnswer QaChain::answer(const std::string& question) const { return answer(question, options_.retrieve); }

SystemAnswer QaChain::answer(const std::string& question, const retrieval::RetrieveOptions& retrieve_options) const {
    if (text::trim(question).empty()) throw ValidationError("question is empty");
    const auto t0 = Clock::now();
    auto r = retrieval::retrieve(question, index_, embed_, retrieve_options.rerank ? rerank_ : nullptr, retrieve_options);
    SystemAnswer draft;
    draft.question = question;
    draft.contexts = std::move(r.chunks);
    draft.used_rag = true;
    draft.rerank_degraded = r.rerank_degraded;
    draft.warning = r.warning;
    draft.timings.embed_ms = r.embed_ms;
    draft.timings.search_ms = r.search_ms;
    draft.timings.rerank_ms = r.rerank_ms;
    SystemAnswer out = generate_from(std::move(draft));
    out.timings.total_ms = ms_since(t0);
    return out;
}

SystemAnswer QaChain::answer_baseline(const std::string& question) const {
    if (text::trim(question).empty()) throw ValidationError("question is empty");
    const auto t0 = Clock::now();
    SystemAnswer draft;
    draft.question = question;
    SystemAnswer out = generate_from(std::move(draft));
    out.timings.total_ms = ms_since(t0);
    return out;
}

SystemAnswer QaChain::generate_from(SystemAnswer draft) const {
    draft.model_id = generate_.model_id();
    std::vector<std::string> texts;
    for (const auto& c : draft.contexts) texts.push_back(c.text);

    // An endpoint that reports a context overflow gets the same prompt with
    // one fewer context until nothing is left to drop.
    const auto t0 = Clock::now();
    while (true) {
        const RenderedPrompt prompt = render_qa_prompt(draft.question, texts, options_.prompt, options_.char_budget);
        if (prompt.contexts_used < draft.contexts.size()) {
            draft.contexts.resize(prompt.contexts_used);
            texts.resize(prompt.contexts_used);
            draft.truncated = true;
        }
        try {
            draft.answer = std::string(text::trim(generate_.generate(prompt.text)));
            break;
        } catch (const providers::ContextOverflowError& e) {
            if (texts.empty()) throw AnswerError(e.what(), draft);
            spdlog::warn("context overflow with {} contexts, retrying with fewer", texts.size());
            texts.pop_back();
            draft.contexts.pop_back();
            draft.truncated = true;
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception& e) {
            throw AnswerError(std::string("generation failed: ") + e.what(), draft);
        }
    }
    draft.timings.generate_ms = ms_since(t0);
    draft.used_rag = !draft.contexts.empty();
    if (draft.answer.empty()) draft.answer = std::string(providers::kRefusal);
    draft.answer_words = text::split_whitespace(draft.answer).size();
    return draft;
}

FinetuneExportStats export_finetune(const std::filesystem::path& qa_path, const std::filesystem::path& chunks_path,
                                    const std::filesystem::path& out_path) {
    const auto pairs = annotation::load_dataset(qa_path);
    const auto chunks = chunking::load_chunks(chunks_path);
    std::unordered_map<std::string, const chunking::Chunk*> by_id;
    for (const auto& c : chunks) by_id.emplace(c.chunk_id, &c);

    FinetuneExportStats stats;
    std::vector<json> records;
    for (const auto& p : pairs) {
        const auto it = by_id.find(p.chunk_id);
        if (it == by_id.end()) {
            ++stats.missing_chunk;
            continue;
        }
        const std::string& context = it->second->text;
        records.push_back({{"text", render_finetune_record(p.question, context, p.answer)},
                           {"question", p.question},
                           {"context", context},
                           {"answer", p.answer},
                           {"chunk_id", p.chunk_id}});
        ++stats.written;
    }
    if (stats.missing_chunk > 0) spdlog::warn("{} QA pairs reference unknown chunks and were skipped", stats.missing_chunk);
    io::write_jsonl(out_path, records);
    return stats;
}

}  // namespace ragqa::generation
