#include "ragqa/retrieval/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ragqa/errors.hpp"

namespace ragqa::retrieval {

double cosine_sim(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) {
        throw ValidationError("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    double dot = 0;
    double na = 0;
    double nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i];
        const double y = b[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0 || nb == 0) throw ValidationError("cosine similarity of a zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace ragqa::retrieval
