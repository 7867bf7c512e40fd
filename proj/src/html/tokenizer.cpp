#include "ragqa/html/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "ragqa/util/text.hpp"

namespace ragqa::html {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool is_raw_text_element(std::string_view name) {
    return name == "script" || name == "style" || name == "title" || name == "textarea" ||
           name == "noscript" || name == "xmp";
}

constexpr std::array<std::pair<std::string_view, char32_t>, 32> kNamedEntities{{
    {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
    {"apos", '\''},     {"nbsp", ' '},      {"copy", 0xA9},     {"reg", 0xAE},
    {"trade", 0x2122},  {"mdash", 0x2014},  {"ndash", 0x2013},  {"hellip", 0x2026},
    {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
    {"bull", 0x2022},   {"middot", 0xB7},   {"laquo", 0xAB},    {"raquo", 0xBB},
    {"eacute", 0xE9},   {"egrave", 0xE8},   {"aacute", 0xE1},   {"agrave", 0xE0},
    {"ouml", 0xF6},     {"uuml", 0xFC},     {"auml", 0xE4},     {"ccedil", 0xE7},
    {"deg", 0xB0},      {"times", 0xD7},    {"sect", 0xA7},     {"para", 0xB6},
}};

}  // namespace

std::optional<std::string_view> Token::attribute(std::string_view attr_name) const {
    for (const auto& a : attributes) {
        if (a.name == attr_name) return std::string_view(a.value);
    }
    return std::nullopt;
}

bool Tokenizer::next(Token& tok) {
    tok = Token{};
    if (pos_ >= in_.size()) return false;

    if (!pending_raw_end_.empty()) {
        const std::string closing = "</" + pending_raw_end_;
        std::size_t end = pos_;
        while (true) {
            end = in_.find("</", end);
            if (end == std::string_view::npos) {
                end = in_.size();
                break;
            }
            if (text::starts_with_icase(in_.substr(end), closing)) {
                const std::size_t after = end + closing.size();
                if (after >= in_.size() || is_ws(in_[after]) || in_[after] == '>' || in_[after] == '/') {
                    break;
                }
            }
            end += 2;
        }
        tok.kind = TokenKind::text;
        tok.raw_text = true;
        tok.name = pending_raw_end_;
        tok.raw = in_.substr(pos_, end - pos_);
        pos_ = end;
        pending_raw_end_.clear();
        return true;
    }

    if (in_[pos_] == '<') {
        const std::size_t save = pos_;
        if (read_tag(tok)) return true;
        pos_ = save;
    }

    // Text runs until the next '<' that can start markup.
    std::size_t end = pos_ + 1;
    while (end < in_.size()) {
        end = in_.find('<', end);
        if (end == std::string_view::npos) {
            end = in_.size();
            break;
        }
        const char n = end + 1 < in_.size() ? in_[end + 1] : '\0';
        if (is_alpha(n) || n == '/' || n == '!' || n == '?') break;
        ++end;
    }
    tok.kind = TokenKind::text;
    tok.raw = in_.substr(pos_, end - pos_);
    pos_ = end;
    return true;
}

bool Tokenizer::read_tag(Token& tok) {
    std::string_view rest = in_.substr(pos_);
    if (rest.substr(0, 4) == "<!--") {
        const auto end = in_.find("-->", pos_ + 4);
        tok.kind = TokenKind::comment;
        tok.raw = in_.substr(pos_ + 4, end == std::string_view::npos ? std::string_view::npos
                                                                     : end - pos_ - 4);
        pos_ = end == std::string_view::npos ? in_.size() : end + 3;
        return true;
    }
    if (rest.size() >= 2 && (rest[1] == '!' || rest[1] == '?')) {
        const auto end = in_.find('>', pos_);
        tok.kind = text::starts_with_icase(rest, "<!doctype") ? TokenKind::doctype : TokenKind::comment;
        tok.raw = in_.substr(pos_ + 2, end == std::string_view::npos ? std::string_view::npos
                                                                     : end - pos_ - 2);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
        return true;
    }

    bool closing = false;
    std::size_t i = pos_ + 1;
    if (i < in_.size() && in_[i] == '/') {
        closing = true;
        ++i;
    }
    if (i >= in_.size() || !is_alpha(in_[i])) return false;

    const std::size_t name_start = i;
    while (i < in_.size() && !is_ws(in_[i]) && in_[i] != '>' && in_[i] != '/') ++i;
    tok.name = text::to_lower_ascii(in_.substr(name_start, i - name_start));
    tok.kind = closing ? TokenKind::end_tag : TokenKind::start_tag;

    while (i < in_.size()) {
        while (i < in_.size() && is_ws(in_[i])) ++i;
        if (i >= in_.size()) break;
        if (in_[i] == '>') {
            ++i;
            break;
        }
        if (in_[i] == '/') {
            tok.self_closing = true;
            ++i;
            continue;
        }
        const std::size_t an = i;
        while (i < in_.size() && !is_ws(in_[i]) && in_[i] != '=' && in_[i] != '>' &&
               !(in_[i] == '/' && i + 1 < in_.size() && in_[i + 1] == '>')) {
            ++i;
        }
        Attribute attr;
        attr.name = text::to_lower_ascii(in_.substr(an, i - an));
        while (i < in_.size() && is_ws(in_[i])) ++i;
        if (i < in_.size() && in_[i] == '=') {
            ++i;
            while (i < in_.size() && is_ws(in_[i])) ++i;
            if (i < in_.size() && (in_[i] == '"' || in_[i] == '\'')) {
                const char q = in_[i++];
                const auto close = in_.find(q, i);
                const std::size_t vend = close == std::string_view::npos ? in_.size() : close;
                attr.value = decode_entities(in_.substr(i, vend - i));
                i = close == std::string_view::npos ? in_.size() : close + 1;
            } else {
                const std::size_t vs = i;
                while (i < in_.size() && !is_ws(in_[i]) && in_[i] != '>') ++i;
                attr.value = decode_entities(in_.substr(vs, i - vs));
            }
        }
        if (!attr.name.empty() && !closing) tok.attributes.push_back(std::move(attr));
    }
    pos_ = i;
    if (!closing && !tok.self_closing && is_raw_text_element(tok.name)) pending_raw_end_ = tok.name;
    return true;
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        const auto semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(s[i++]);
            continue;
        }
        const std::string_view ent = s.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (ent.size() >= 2 && ent[0] == '#') {
            const bool hex = ent[1] == 'x' || ent[1] == 'X';
            const std::string_view digits = ent.substr(hex ? 2 : 1);
            char32_t cp = 0;
            bool ok = !digits.empty();
            for (const char c : digits) {
                const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                              : hex && std::isxdigit(static_cast<unsigned char>(c))
                                  ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                                  : -1;
                if (v < 0 || cp > 0x10FFFF) {
                    ok = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
            }
            if (ok) {
                text::append_utf8(out, cp == 0xA0 ? U' ' : cp);
                decoded = true;
            }
        } else {
            for (const auto& [name, cp] : kNamedEntities) {
                if (name == ent) {
                    text::append_utf8(out, cp);
                    decoded = true;
                    break;
                }
            }
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

bool is_block_element(std::string_view tag) {
    static constexpr std::array<std::string_view, 38> kBlocks{
        "address", "article", "aside",  "blockquote", "br",      "dd",     "details", "div",
        "dl",      "dt",      "fieldset", "figcaption", "figure", "form",  "h1",      "h2",
        "h3",      "h4",      "h5",     "h6",         "hr",      "li",     "main",    "ol",
        "p",       "pre",     "section", "summary",   "table",   "tbody",  "td",      "tfoot",
        "th",      "thead",   "tr",     "ul",         "body",    "option"};
    return std::find(kBlocks.begin(), kBlocks.end(), tag) != kBlocks.end();
}

}  // namespace ragqa::html
