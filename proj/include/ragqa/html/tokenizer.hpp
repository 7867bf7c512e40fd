#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragqa::html {

enum class TokenKind { text, start_tag, end_tag, comment, doctype };

struct Attribute {
    std::string name;   // lowercased
    std::string value;  // entities decoded
};

struct Token {
    TokenKind kind = TokenKind::text;
    std::string name;       // lowercased tag name for tags
    std::string_view raw;   // undecoded text for text tokens
    std::vector<Attribute> attributes;
    bool self_closing = false;
    bool raw_text = false;  // contents of script/style/title/textarea, never tag-parsed

    std::optional<std::string_view> attribute(std::string_view name) const;
};

/// Forgiving streaming tokenizer. Never fails: malformed markup degrades to
/// text. Contents of script, style, title, textarea and noscript are
/// returned as a single raw-text token.
class Tokenizer {
public:
    explicit Tokenizer(std::string_view input) : in_(input) {}

    /// False at end of input.
    bool next(Token& tok);

private:
    bool read_tag(Token& tok);

    std::string_view in_;
    std::size_t pos_ = 0;
    std::string pending_raw_end_;  // tag name whose raw body comes next
};

/// Decodes character references (named subset and numeric). Non-breaking
/// spaces decode to U+0020.
std::string decode_entities(std::string_view s);

bool is_block_element(std::string_view tag);

}  // namespace ragqa::html
