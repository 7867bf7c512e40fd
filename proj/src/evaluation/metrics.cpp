#include "ragqa/evaluation/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "ragqa/errors.hpp"
#include "ragqa/retrieval/similarity.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::evaluation {
namespace {

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::map<std::vector<std::string>, std::size_t> ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        ++out[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                       toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
    return out;
}

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (std::string_view tok : text::split_whitespace(text)) {
        while (!tok.empty() && is_punct(tok.front())) tok.remove_prefix(1);
        while (!tok.empty() && is_punct(tok.back())) tok.remove_suffix(1);
        if (!tok.empty()) out.push_back(text::to_lower_ascii(tok));
    }
    return out;
}

PRF token_prf(std::string_view prediction, std::string_view gold) {
    const auto pred = normalize_tokens(prediction);
    const auto ref = normalize_tokens(gold);
    std::map<std::string, std::size_t> ref_counts;
    for (const auto& t : ref) ++ref_counts[t];
    std::size_t tp = 0;
    for (const auto& t : pred) {
        auto it = ref_counts.find(t);
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++tp;
        }
    }
    PRF r;
    r.precision = pred.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred.size());
    r.recall = ref.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(ref.size());
    // 2PR/(P+R) written over counts, which avoids rounding in the intermediate ratios
    r.f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(pred.size() + ref.size());
    return r;
}

double bleu(std::string_view prediction, std::string_view gold, std::size_t max_n) {
    if (max_n < 1) throw ValidationError("BLEU order must be at least 1");
    const auto cand = normalize_tokens(prediction);
    const auto ref = normalize_tokens(gold);
    if (cand.empty()) return 0.0;

    double log_sum = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        if (cand.size() < n) return 0.0;
        const auto c_counts = ngram_counts(cand, n);
        const auto r_counts = ngram_counts(ref, n);
        std::size_t clipped = 0;
        for (const auto& [gram, count] : c_counts) {
            const auto it = r_counts.find(gram);
            if (it != r_counts.end()) clipped += std::min(count, it->second);
        }
        if (clipped == 0) return 0.0;
        const double p_n = static_cast<double>(clipped) / static_cast<double>(cand.size() - n + 1);
        log_sum += std::log(p_n) / static_cast<double>(max_n);
    }
    const double c = static_cast<double>(cand.size());
    const double r = static_cast<double>(ref.size());
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum);
}

double answer_cosine(std::string_view prediction, std::string_view gold, providers::EmbeddingProvider& embed) {
    const auto v = embed.embed_batch({std::string(prediction), std::string(gold)});
    return std::max(0.0, retrieval::cosine_sim(v[0], v[1]));
}

}  // namespace ragqa::evaluation
