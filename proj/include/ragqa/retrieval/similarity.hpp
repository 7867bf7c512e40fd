#pragma once

#include <span>

namespace ragqa::retrieval {

/// (a . b) / (|a| |b|), accumulated in double. Throws ValidationError on a
/// length mismatch or a zero vector.
double cosine_sim(std::span<const float> a, std::span<const float> b);

}  // namespace ragqa::retrieval
