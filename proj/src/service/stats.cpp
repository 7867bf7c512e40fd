#include "ragqa/service/stats.hpp"

#include <spdlog/spdlog.h>

#include "ragqa/annotation/annotate.hpp"
#include "ragqa/chunking/chunker.hpp"
#include "ragqa/extraction/document.hpp"

namespace ragqa::service {
namespace fs = std::filesystem;

namespace {

json count_clean(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return nullptr;
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") ++n;
    }
    return n;
}

}  // namespace

json corpus_stats(const StorePaths& paths) {
    json out;
    for (const auto cat : {acquisition::Category::html, acquisition::Category::pdf, acquisition::Category::paper}) {
        const std::string name(acquisition::to_string(cat));
        out[name] = paths.clean_root.empty() ? json(nullptr) : count_clean(paths.clean_root / name);
    }

    out["chunks"] = nullptr;
    if (!paths.chunks.empty() && fs::exists(paths.chunks)) {
        try {
            out["chunks"] = chunking::load_chunks(paths.chunks).size();
        } catch (const std::exception& e) {
            spdlog::warn("chunk store unreadable: {}", e.what());
        }
    }

    out["qa"] = {{"train", nullptr}, {"test", nullptr}, {"unsplit", nullptr}};
    if (!paths.qa.empty() && fs::exists(paths.qa)) {
        try {
            std::size_t counts[3] = {0, 0, 0};
            for (const auto& p : annotation::load_dataset(paths.qa)) ++counts[static_cast<int>(p.split)];
            out["qa"] = {{"train", counts[0]}, {"test", counts[1]}, {"unsplit", counts[2]}};
        } catch (const std::exception& e) {
            spdlog::warn("QA store unreadable: {}", e.what());
        }
    }
    return out;
}

}  // namespace ragqa::service
