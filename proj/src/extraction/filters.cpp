#include "ragqa/extraction/filters.hpp"

#include <cmath>
#include <map>
#include <set>

#include "ragqa/acquisition/url.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::extraction {

const std::vector<std::string>& default_keywords() {
    static const std::vector<std::string> kKeywords{
        "cmu",    "carnegie", "mellon", "university", "tartans", "scotty", "pittsburgh", "carnival",
        "CMU",    "Carnegie", "Mellon", "University", "Tartans", "Scotty", "Pittsburgh", "Carnival",
    };
    return kKeywords;
}

std::vector<std::string> parse_keyword_file(std::string_view contents) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= contents.size()) {
        const auto nl = contents.find('\n', start);
        const auto line =
            text::trim(contents.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (!line.empty() && line.front() != '#') out.emplace_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

FilterVerdict relevance_filter(const CleanDocument& doc, const std::vector<std::string>& keywords) {
    if (keywords.empty()) throw ValidationError("keyword list is empty");
    if (doc.category == Category::paper) return FilterVerdict::keep();
    for (const auto& k : keywords) {
        if (k.empty()) continue;
        if (doc.title.find(k) != std::string::npos || doc.text.find(k) != std::string::npos) {
            return FilterVerdict::keep();
        }
    }
    return FilterVerdict::drop(FilterReason::no_keyword);
}

FilterVerdict quality_filter(const CleanDocument& doc, std::size_t min_chars) {
    if (doc.char_count < min_chars) return FilterVerdict::drop(FilterReason::too_short);
    if (doc.title.find(kErrorTitle) != std::string::npos) return FilterVerdict::drop(FilterReason::error_page);
    return FilterVerdict::keep();
}

FilterVerdict apply_filters(const CleanDocument& doc, const std::vector<std::string>& keywords,
                            std::size_t min_chars) {
    const FilterVerdict rel = relevance_filter(doc, keywords);
    if (!rel.kept) return rel;
    return quality_filter(doc, min_chars);
}

std::size_t strip_boilerplate_lines(std::vector<CleanDocument>& docs, double share) {
    std::map<std::string, std::vector<std::size_t>> by_host;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (docs[i].category != Category::html) continue;
        by_host[acquisition::host_key(docs[i].url)].push_back(i);
    }

    std::size_t removed = 0;
    for (const auto& [host, members] : by_host) {
        if (members.size() < 3) continue;
        const auto threshold = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::ceil(share * static_cast<double>(members.size()) - 1e-9)));

        std::map<std::string, std::size_t> pages_with_line;
        for (const std::size_t i : members) {
            std::set<std::string_view> seen;
            std::size_t start = 0;
            const std::string& t = docs[i].text;
            while (start <= t.size()) {
                const auto nl = t.find('\n', start);
                const std::string_view line(t.data() + start, (nl == std::string::npos ? t.size() : nl) - start);
                if (!line.empty() && seen.insert(line).second) ++pages_with_line[std::string(line)];
                if (nl == std::string::npos) break;
                start = nl + 1;
            }
        }

        for (const std::size_t i : members) {
            std::string kept;
            std::size_t start = 0;
            const std::string& t = docs[i].text;
            while (start <= t.size()) {
                const auto nl = t.find('\n', start);
                const std::string line = t.substr(start, (nl == std::string::npos ? t.size() : nl) - start);
                if (pages_with_line[line] >= threshold) {
                    ++removed;
                } else {
                    if (!kept.empty()) kept.push_back('\n');
                    kept += line;
                }
                if (nl == std::string::npos) break;
                start = nl + 1;
            }
            docs[i].text = std::move(kept);
            docs[i].refresh_count();
        }
    }
    return removed;
}

}  // namespace ragqa::extraction
