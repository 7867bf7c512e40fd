#pragma once

#include <filesystem>
#include <optional>

#include "ragqa/util/json_io.hpp"

namespace ragqa::service {

struct StorePaths {
    std::filesystem::path clean_root;  // clean/{html,pdf,paper}
    std::filesystem::path chunks;      // chunks.jsonl
    std::filesystem::path qa;          // qa.jsonl (split-tagged)
};

/// {"html", "pdf", "paper", "chunks", "qa": {"train", "test", "unsplit"}}.
/// A missing store gives null for its fields instead of an error.
json corpus_stats(const StorePaths& paths);

}  // namespace ragqa::service
