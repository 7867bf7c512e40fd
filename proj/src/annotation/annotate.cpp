#include "ragqa/annotation/annotate.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "ragqa/errors.hpp"
#include "ragqa/util/random.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::annotation {

std::string_view to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::test: return "test";
        case Split::unsplit: return "unsplit";
    }
    return "unsplit";
}

Split split_from(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "test") return Split::test;
    if (s == "unsplit" || s.empty()) return Split::unsplit;
    throw ValidationError("unknown split: " + std::string(s));
}

json AnnotationResult::report_json() const {
    json items = json::array();
    std::size_t failed = 0;
    for (const auto& c : chunks) {
        if (c.status == "parse_failed" || c.status == "provider_failed") ++failed;
        items.push_back({{"chunk_id", c.chunk_id},
                         {"status", c.status},
                         {"attempts", c.attempts},
                         {"pairs_kept", c.pairs_kept},
                         {"pairs_dropped", c.pairs_dropped},
                         {"duplicates_dropped", c.duplicates_dropped},
                         {"error", c.error}});
    }
    return json{{"chunks", items},
                {"total_chunks", chunks.size()},
                {"failed_chunks", failed},
                {"total_pairs", pairs.size()}};
}

namespace {

struct ChunkOutcome {
    ChunkReport report;
    std::vector<QAPair> pairs;
};

ChunkOutcome annotate_one(const chunking::Chunk& chunk, providers::GenerationProvider& gen,
                          const AnnotationOptions& opts) {
    ChunkOutcome out;
    out.report.chunk_id = chunk.chunk_id;
    const std::string prompt = build_annotation_prompt(chunk, opts.num_qas);
    for (std::size_t attempt = 1; attempt <= std::max<std::size_t>(1, opts.max_attempts); ++attempt) {
        out.report.attempts = attempt;
        std::string raw;
        try {
            raw = gen.generate(prompt);
        } catch (const providers::ProviderError& e) {
            out.report.status = "provider_failed";
            out.report.error = e.what();
            continue;
        }
        try {
            ParsedResponse parsed = parse_qa_response(raw);
            std::set<std::pair<std::string, std::string>> seen;
            for (auto& qa : parsed.pairs) {
                if (!seen.emplace(qa.question, qa.answer).second) {
                    ++out.report.duplicates_dropped;
                    continue;
                }
                out.pairs.push_back(QAPair{std::move(qa.question), std::move(qa.answer), chunk.chunk_id, Split::unsplit});
            }
            out.report.pairs_dropped = parsed.dropped;
            out.report.pairs_kept = out.pairs.size();
            out.report.status = out.pairs.empty() ? "empty" : "ok";
            out.report.error.clear();
            return out;
        } catch (const QaParseError& e) {
            out.report.status = "parse_failed";
            out.report.error = e.what();
        }
    }
    spdlog::warn("chunk {} skipped after {} attempts: {}", chunk.chunk_id, out.report.attempts, out.report.error);
    return out;
}

}  // namespace

AnnotationResult annotate_corpus(const std::vector<chunking::Chunk>& chunks, providers::GenerationProvider& generator,
                                 const AnnotationOptions& options) {
    if (options.num_qas < 1) throw ValidationError("num_qas must be at least 1");
    std::vector<ChunkOutcome> outcomes(chunks.size());
    const std::size_t workers = std::clamp<std::size_t>(options.concurrency, 1, std::max<std::size_t>(1, chunks.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < chunks.size(); ++i) outcomes[i] = annotate_one(chunks[i], generator, options);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < chunks.size(); i = next++) {
                    outcomes[i] = annotate_one(chunks[i], generator, options);
                }
            });
        }
    }

    AnnotationResult result;
    for (auto& o : outcomes) {
        result.pairs.insert(result.pairs.end(), std::make_move_iterator(o.pairs.begin()),
                            std::make_move_iterator(o.pairs.end()));
        result.chunks.push_back(std::move(o.report));
    }
    return result;
}

std::size_t train_size(std::size_t n, double train_fraction) {
    // The epsilon keeps exact products such as 10 * 0.8 from landing at 7.999...
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 1e-9));
}

std::pair<std::vector<QAPair>, std::vector<QAPair>> split_dataset(std::vector<QAPair> pairs, double train_fraction,
                                                                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ValidationError("train fraction must be in (0, 1)");
    if (pairs.size() < 2) throw ValidationError("need at least 2 pairs to split");
    deterministic_shuffle(std::span<QAPair>(pairs), seed);
    const std::size_t cut = train_size(pairs.size(), train_fraction);
    std::vector<QAPair> train(std::make_move_iterator(pairs.begin()),
                              std::make_move_iterator(pairs.begin() + static_cast<std::ptrdiff_t>(cut)));
    std::vector<QAPair> test(std::make_move_iterator(pairs.begin() + static_cast<std::ptrdiff_t>(cut)),
                             std::make_move_iterator(pairs.end()));
    for (auto& p : train) p.split = Split::train;
    for (auto& p : test) p.split = Split::test;
    return {std::move(train), std::move(test)};
}

void save_dataset(const std::filesystem::path& path, const std::vector<QAPair>& pairs) {
    std::vector<json> records;
    records.reserve(pairs.size());
    for (const auto& p : pairs) {
        records.push_back({{"question", p.question},
                           {"answer", p.answer},
                           {"chunk_id", p.chunk_id},
                           {"split", std::string(to_string(p.split))}});
    }
    io::write_jsonl(path, records);
}

std::vector<QAPair> load_dataset(const std::filesystem::path& path) {
    std::vector<QAPair> out;
    std::size_t line = 0;
    for (const auto& r : io::read_jsonl(path)) {
        ++line;
        try {
            QAPair p;
            p.question = r.at("question").get<std::string>();
            p.answer = r.at("answer").get<std::string>();
            p.chunk_id = r.value("chunk_id", "");
            p.split = split_from(r.value("split", "unsplit"));
            if (text::trim(p.question).empty() || text::trim(p.answer).empty()) {
                throw FormatError("empty question or answer");
            }
            out.push_back(std::move(p));
        } catch (const std::exception& e) {
            throw FormatError(path.string() + ": record " + std::to_string(line) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ragqa::annotation
