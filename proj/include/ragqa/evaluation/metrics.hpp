#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ragqa/providers/provider.hpp"

namespace ragqa::evaluation {

/// Lowercase, split on whitespace, strip leading/trailing punctuation from
/// each token, drop empties. Duplicates are kept.
std::vector<std::string> normalize_tokens(std::string_view text);

struct PRF {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

/// Multiset token overlap. Empty prediction gives P = 0, empty gold R = 0,
/// and P + R = 0 gives F1 = 0.
PRF token_prf(std::string_view prediction, std::string_view gold);

/// Sentence BLEU against one reference over normalized tokens: clipped
/// n-gram precisions for n = 1..max_n, uniform weights, brevity penalty
/// exp(1 - r/c) unless c > r. Any zero precision (including too few
/// candidate tokens for an order) gives 0. Throws ValidationError when max_n < 1.
double bleu(std::string_view prediction, std::string_view gold, std::size_t max_n = 4);

/// Cosine of the two embeddings, floored at 0. Provider errors propagate.
double answer_cosine(std::string_view prediction, std::string_view gold, providers::EmbeddingProvider& embed);

}  // namespace ragqa::evaluation
