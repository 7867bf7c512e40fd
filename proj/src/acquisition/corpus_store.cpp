#include "ragqa/acquisition/corpus_store.hpp"

#include <algorithm>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "ragqa/acquisition/url.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::acquisition {
namespace fs = std::filesystem;
namespace {

constexpr std::size_t kMaxSegment = 200;

std::string safe_segment(std::string_view raw) {
    std::string seg = text::percent_encode(raw);
    if (seg.empty()) seg = "_";
    if (seg.size() > kMaxSegment) {
        seg = seg.substr(0, kMaxSegment - 17) + "-" + text::hex64(text::fnv1a64(raw));
    }
    return seg;
}

bool ends_with_icase(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && text::starts_with_icase(s.substr(s.size() - suffix.size()), suffix);
}

fs::path sidecar_for(const fs::path& file) {
    fs::path p = file;
    p.replace_extension(".meta.json");
    return p;
}

std::chrono::system_clock::time_point parse_rfc3339(const std::string& s) {
    std::tm tm{};
    std::istringstream in(s);
    in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%S");
    if (in.fail()) return {};
    return std::chrono::system_clock::from_time_t(timegm(&tm));
}

json sidecar_json(const RawDocument& doc) {
    json meta = {
        {"url", doc.url},
        {"fetched_at", io::rfc3339(doc.fetched_at)},
        {"depth", doc.depth},
        {"seed_origin", doc.seed_origin},
    };
    if (doc.paper_id) meta["paper_id"] = *doc.paper_id;
    return meta;
}

}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::html: return "html";
        case Category::pdf: return "pdf";
        case Category::paper: return "paper";
    }
    return "html";
}

Category category_of(const RawDocument& doc) {
    if (doc.paper_id) return Category::paper;
    return doc.media_kind == MediaKind::pdf ? Category::pdf : Category::html;
}

fs::path storage_name(const RawDocument& doc) {
    const Category cat = category_of(doc);
    if (cat == Category::paper) {
        return fs::path("paper") / (safe_segment(*doc.paper_id) + ".pdf");
    }
    const std::string_view ext = cat == Category::pdf ? ".pdf" : ".html";
    const auto url = Url::parse(doc.url);
    if (!url || !url->has_authority) throw ValidationError("cannot derive a storage name from " + doc.url);

    fs::path out = fs::path(to_string(cat)) / safe_segment(url->authority());
    std::vector<std::string_view> segments;
    std::string_view path = url->path;
    if (!path.empty() && path.front() == '/') path.remove_prefix(1);
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto slash = path.find('/', start);
        segments.push_back(path.substr(start, slash == std::string_view::npos ? std::string_view::npos
                                                                            : slash - start));
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    // Trailing slash or bare host: the last segment is the directory index.
    std::string last(segments.back());
    segments.pop_back();
    if (last.empty()) last = "index";
    if (cat == Category::html) {
        for (const std::string_view e : {".html", ".htm"}) {
            if (ends_with_icase(last, e) && last.size() > e.size()) {
                last.resize(last.size() - e.size());
                break;
            }
        }
    } else if (ends_with_icase(last, ".pdf") && last.size() > 4) {
        last.resize(last.size() - 4);
    }
    for (const auto seg : segments) out /= safe_segment(seg);
    std::string leaf = safe_segment(last);
    if (url->has_query) leaf += "%3F" + text::percent_encode(url->query);
    if (leaf.size() > kMaxSegment) leaf = leaf.substr(0, kMaxSegment - 17) + "-" + text::hex64(text::fnv1a64(leaf));
    out /= leaf + std::string(ext);
    return out;
}

fs::path store_raw(const RawDocument& doc, const fs::path& root) {
    const fs::path base = storage_name(doc);
    const std::string stem = base.stem().string();
    const std::string ext = base.extension().string();

    fs::path rel = base;
    for (int suffix = 1;; ++suffix) {
        const fs::path meta = sidecar_for(root / rel);
        std::error_code ec;
        if (!fs::exists(root / rel, ec) && !fs::exists(meta, ec)) break;
        try {
            const json existing = json::parse(io::read_file(meta));
            if (existing.value("url", "") == doc.url) break;
        } catch (const std::exception&) {
            // unreadable sidecar: treat the name as taken
        }
        rel = base.parent_path() / (stem + "-" + std::to_string(suffix) + ext);
    }

    io::write_file(root / rel, doc.body);
    io::write_file(sidecar_for(root / rel), io::dump_pretty(sidecar_json(doc)));
    return rel;
}

std::vector<StoredRaw> load_raw_corpus(const fs::path& root) {
    std::vector<StoredRaw> out;
    for (const Category cat : {Category::html, Category::pdf, Category::paper}) {
        const fs::path dir = root / std::string(to_string(cat));
        std::error_code ec;
        if (!fs::is_directory(dir, ec)) continue;
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const fs::path& p = entry.path();
            const std::string name = p.filename().string();
            if (name.size() >= 10 && name.ends_with(".meta.json")) continue;
            const fs::path meta_path = sidecar_for(p);
            if (!fs::exists(meta_path)) continue;

            StoredRaw item;
            item.category = cat;
            item.relative_path = fs::relative(p, root);
            const json meta = json::parse(io::read_file(meta_path));
            item.doc.url = meta.value("url", "");
            item.doc.fetched_at = parse_rfc3339(meta.value("fetched_at", ""));
            item.doc.depth = meta.value("depth", 0);
            item.doc.seed_origin = meta.value("seed_origin", "");
            if (meta.contains("paper_id")) item.doc.paper_id = meta["paper_id"].get<std::string>();
            item.doc.media_kind = cat == Category::html ? MediaKind::html : MediaKind::pdf;
            item.doc.body = io::read_file(p);
            out.push_back(std::move(item));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const StoredRaw& a, const StoredRaw& b) { return a.relative_path < b.relative_path; });
    return out;
}

}  // namespace ragqa::acquisition
