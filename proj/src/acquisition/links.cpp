#include <unordered_set>

#include "ragqa/acquisition/crawler.hpp"
#include "ragqa/acquisition/url.hpp"
#include "ragqa/html/tokenizer.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::acquisition {

std::string_view to_string(MediaKind kind) {
    return kind == MediaKind::pdf ? "pdf" : "html";
}

std::optional<MediaKind> sniff_media_kind(std::string_view body, std::string_view content_type) {
    if (body.substr(0, 5) == "%PDF-" || body.substr(0, 4) == "%PDF") return MediaKind::pdf;
    std::string_view head = text::trim(body.substr(0, 1024));
    if (head.substr(0, 3) == "\xEF\xBB\xBF") head = text::trim(head.substr(3));
    for (const std::string_view marker : {"<!doctype html", "<html", "<head", "<body", "<!--", "<title", "<p", "<div"}) {
        if (text::starts_with_icase(head, marker)) return MediaKind::html;
    }
    const std::string ct = text::to_lower_ascii(content_type);
    if (ct.find("application/pdf") != std::string::npos) return MediaKind::pdf;
    if (ct.find("text/html") != std::string::npos || ct.find("application/xhtml") != std::string::npos) {
        return MediaKind::html;
    }
    return std::nullopt;
}

std::vector<std::string> extract_links(std::string_view html_body, std::string_view base,
                                       const std::set<std::string>& allowed_schemes) {
    std::vector<std::string> out;
    auto base_url = Url::parse(base);
    if (!base_url || !base_url->is_absolute()) return out;

    std::unordered_set<std::string> seen;
    html::Tokenizer tokenizer(html_body);
    html::Token tok;
    bool base_overridden = false;
    while (tokenizer.next(tok)) {
        if (tok.kind != html::TokenKind::start_tag) continue;
        if (tok.name == "base" && !base_overridden) {
            if (auto href = tok.attribute("href")) {
                if (auto resolved = resolve(*base_url, text::trim(*href)); resolved && resolved->is_absolute()) {
                    base_url = *resolved;
                    base_overridden = true;
                }
            }
            continue;
        }
        if (tok.name != "a" && tok.name != "area") continue;
        const auto href = tok.attribute("href");
        if (!href) continue;
        const std::string_view ref = text::trim(*href);
        if (ref.empty() || ref.front() == '#') continue;
        auto target = resolve(*base_url, ref);
        if (!target || !allowed_schemes.contains(target->scheme)) continue;
        auto canonical = canonicalize(target->str());
        if (!canonical) continue;
        if (seen.insert(*canonical).second) out.push_back(std::move(*canonical));
    }
    return out;
}

std::vector<std::string> parse_seed_file(std::string_view contents) {
    std::vector<std::string> seeds;
    std::size_t start = 0;
    while (start <= contents.size()) {
        const auto nl = contents.find('\n', start);
        const auto line = text::trim(contents.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                                          : nl - start));
        if (!line.empty() && line.front() != '#') seeds.emplace_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return seeds;
}

}  // namespace ragqa::acquisition
