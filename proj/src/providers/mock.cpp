#include "ragqa/providers/mock.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::providers {
namespace {

constexpr std::string_view kEmptySentinel = "\x01<empty>";

std::set<std::string> token_set(std::string_view s) {
    auto toks = mock_tokens(s);
    return {toks.begin(), toks.end()};
}

struct QaPrompt {
    std::string question;
    std::string context;
};

std::optional<QaPrompt> parse_qa_prompt(std::string_view prompt) {
    const auto q = prompt.find("Question:");
    if (q == std::string_view::npos) return std::nullopt;
    const auto c = prompt.find("Context:", q);
    if (c == std::string_view::npos) return std::nullopt;
    auto a = prompt.rfind("Answer:");
    if (a == std::string_view::npos || a < c) a = prompt.size();
    QaPrompt out;
    out.question = std::string(text::trim(prompt.substr(q + 9, c - q - 9)));
    out.context = std::string(text::trim(prompt.substr(c + 8, a - c - 8)));
    return out;
}

bool is_annotation_prompt(std::string_view prompt) {
    return prompt.find("### Instruction:") != std::string_view::npos &&
           prompt.find("question and answer pairs") != std::string_view::npos;
}

std::string annotation_response(std::string_view prompt) {
    std::size_t num_qas = 10;
    if (const auto at = prompt.find("come up with "); at != std::string_view::npos) {
        std::size_t i = at + 13;
        std::size_t n = 0;
        bool any = false;
        while (i < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[i]))) {
            n = n * 10 + static_cast<std::size_t>(prompt[i] - '0');
            any = true;
            ++i;
        }
        if (any) num_qas = std::min<std::size_t>(n, 1000);
    }
    std::string_view passage;
    if (const auto sep = prompt.find("----------------\n"); sep != std::string_view::npos) {
        passage = prompt.substr(sep + 17);
        if (const auto end = passage.rfind("### Response:"); end != std::string_view::npos) {
            passage = passage.substr(0, end);
        }
    }
    auto sentences = split_sentences(passage);
    if (sentences.empty()) sentences.emplace_back("The passage is empty.");

    json pairs = json::array();
    for (std::size_t i = 0; i < num_qas; ++i) {
        const std::string& s = sentences[i % sentences.size()];
        const std::size_t round = i / sentences.size();
        const auto words = text::split_whitespace(s);
        std::string topic;
        for (std::size_t w = 0; w < std::min<std::size_t>(words.size(), 8); ++w) {
            if (w > 0) topic.push_back(' ');
            topic.append(words[w]);
        }
        while (!topic.empty() && std::ispunct(static_cast<unsigned char>(topic.back()))) topic.pop_back();
        std::string question = "What does the passage state about \"" + topic + "\"?";
        if (round > 0) question += " (variant " + std::to_string(round + 1) + ")";
        pairs.push_back({{"question", question}, {"answer", s}});
    }
    return "Here are the question/answer pairs:\n```\n" + pairs.dump(4) + "\n```\n";
}

}  // namespace

std::vector<std::string> mock_tokens(std::string_view text) { return text::word_tokens(text); }

std::size_t mock_bucket(std::string_view token, std::size_t dim, std::uint64_t seed) {
    std::string bytes(8, '\0');
    for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((seed >> (8 * i)) & 0xFF);
    bytes.append(token);
    return static_cast<std::size_t>(text::fnv1a64(bytes) % dim);
}

Embedding mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
    if (dim < 8) throw ValidationError("mock embedding dim must be at least 8");
    std::vector<double> hist(dim, 0.0);
    auto tokens = mock_tokens(text);
    if (tokens.empty()) tokens.emplace_back(kEmptySentinel);
    for (const auto& t : tokens) hist[mock_bucket(t, dim, seed)] += 1.0;
    double sq = 0;
    for (const double h : hist) sq += h * h;
    const double norm = std::sqrt(sq);
    Embedding v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<float>(hist[i] / norm);
    return v;
}

double mock_rerank_score(std::string_view query, std::string_view candidate) {
    const auto q = token_set(query);
    if (q.empty()) return 0.0;
    const auto c = token_set(candidate);
    std::size_t hit = 0;
    for (const auto& t : q) hit += c.count(t);
    return static_cast<double>(hit) / static_cast<double>(q.size());
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        const auto s = text::trim(text.substr(start, end - start));
        if (!s.empty()) out.emplace_back(s);
        start = end;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n' || c == '\f' || c == '\r') {
            emit(i);
            start = i + 1;
        } else if ((c == '.' || c == '!' || c == '?') &&
                   (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            emit(i + 1);
        }
    }
    if (start < text.size()) emit(text.size());
    return out;
}

std::string mock_generate(std::string_view prompt) {
    if (is_annotation_prompt(prompt)) return annotation_response(prompt);
    const auto parsed = parse_qa_prompt(prompt);
    if (!parsed || parsed->context.empty()) return std::string(kRefusal);

    const auto question = token_set(parsed->question);
    std::size_t best_overlap = 0;
    std::string best;
    for (const auto& s : split_sentences(parsed->context)) {
        std::size_t overlap = 0;
        for (const auto& t : token_set(s)) overlap += question.count(t);
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = s;
        }
    }
    return best_overlap == 0 ? std::string(kRefusal) : best;
}

MockEmbedding::MockEmbedding(ProviderConfig cfg) : EmbeddingProvider(std::move(cfg)) {
    if (config().mock_dim < 8) throw ValidationError("mock embedding dim must be at least 8");
}

std::vector<Embedding> MockEmbedding::embed_raw(const std::vector<std::string>& texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(mock_embed(t, config().mock_dim, config().mock_seed()));
    return out;
}

std::vector<double> MockReranker::score_raw(const std::string& query, const std::vector<std::string>& candidates) {
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(mock_rerank_score(query, c));
    return out;
}

std::string MockGenerator::generate_raw(const std::string& prompt) { return mock_generate(prompt); }

}  // namespace ragqa::providers
