#include <cctype>
#include <map>

#include "ragqa/extraction/extract.hpp"
#include "ragqa/html/tokenizer.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::extraction {
namespace {

// Elements whose whole subtree is dropped.
bool is_skipped_region(std::string_view tag) {
    return tag == "nav" || tag == "header" || tag == "footer" || tag == "template" || tag == "svg" ||
           tag == "head" || tag == "iframe" || tag == "object" || tag == "select";
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

class LineBuilder {
public:
    void append(std::string_view s) {
        for (const char c : s) {
            if (is_space(c)) {
                pending_space_ = !line_.empty();
                continue;
            }
            if (pending_space_) line_.push_back(' ');
            pending_space_ = false;
            line_.push_back(c);
        }
    }

    void flush() {
        if (!line_.empty()) {
            if (!out_.empty()) out_.push_back('\n');
            out_ += line_;
        }
        line_.clear();
        pending_space_ = false;
    }

    std::string take() {
        flush();
        return std::move(out_);
    }

private:
    std::string out_;
    std::string line_;
    bool pending_space_ = false;
};

std::string collapse(std::string_view s) {
    LineBuilder b;
    b.append(s);
    return b.take();
}

// A decoded "&lt;p" must not read as a tag.
std::string defang_angles(std::string s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '<' && std::isalpha(static_cast<unsigned char>(s[i + 1]))) s.insert(i + 1, 1, ' ');
    }
    return s;
}

}  // namespace

HtmlText extract_html(std::string_view utf8_html) {
    HtmlText out;
    bool have_title = false;
    std::map<std::string, int> skipped;
    int skip_total = 0;
    LineBuilder lines;

    html::Tokenizer tok(utf8_html);
    html::Token t;
    while (tok.next(t)) {
        switch (t.kind) {
            case html::TokenKind::start_tag:
                if (t.name == "body") {
                    // Stray head content never leaks past <body>.
                    skip_total -= skipped["head"];
                    skipped["head"] = 0;
                }
                if (is_skipped_region(t.name) && !t.self_closing) {
                    ++skipped[t.name];
                    ++skip_total;
                } else if (t.name == "br" || html::is_block_element(t.name)) {
                    lines.flush();
                }
                break;
            case html::TokenKind::end_tag:
                if (is_skipped_region(t.name)) {
                    if (skipped[t.name] > 0) {
                        --skipped[t.name];
                        --skip_total;
                    }
                } else if (t.name == "body" || t.name == "html") {
                    skipped.clear();
                    skip_total = 0;
                    lines.flush();
                } else if (html::is_block_element(t.name) || t.name == "br") {
                    lines.flush();
                }
                break;
            case html::TokenKind::text:
                if (t.raw_text) {
                    if (t.name == "title" && !have_title) {
                        out.title = collapse(html::decode_entities(t.raw));
                        have_title = true;
                    }
                    break;  // script, style, textarea, noscript bodies
                }
                if (skip_total == 0) lines.append(html::decode_entities(t.raw));
                break;
            case html::TokenKind::comment:
            case html::TokenKind::doctype:
                break;
        }
    }
    out.text = defang_angles(lines.take());
    out.title = defang_angles(std::move(out.title));
    return out;
}

CleanDocument html_to_text(const acquisition::RawDocument& raw, std::string_view source_path, Category category) {
    CleanDocument doc;
    const std::string utf8 = text::sanitize_utf8(raw.body, doc.lossy_decode);
    HtmlText h = extract_html(utf8);
    doc.doc_id = doc_id_for(raw.url);
    doc.url = raw.url;
    doc.title = std::move(h.title);
    doc.text = std::move(h.text);
    doc.category = category;
    doc.source_path = std::string(source_path);
    doc.refresh_count();
    return doc;
}

}  // namespace ragqa::extraction
