#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ragqa::text {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Maximal runs of non-whitespace, in order.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Lowercased runs of ASCII alphanumerics; bytes >= 0x80 count as word characters
/// so UTF-8 words stay intact.
std::vector<std::string> word_tokens(std::string_view s);

/// Number of Unicode scalar values in a UTF-8 string (invalid bytes count as one each).
std::size_t utf8_length(std::string_view s);

/// Replaces every invalid UTF-8 sequence with U+FFFD. Sets `lossy` when a replacement happened.
std::string sanitize_utf8(std::string_view s, bool& lossy);

/// Appends the UTF-8 encoding of a code point. Surrogates and out-of-range values become U+FFFD.
void append_utf8(std::string& out, char32_t cp);

/// Byte offset of the `n`-th code point boundary, or s.size() when the string is shorter.
std::size_t utf8_prefix_bytes(std::string_view s, std::size_t n);

bool starts_with_icase(std::string_view s, std::string_view prefix);

/// 64-bit FNV-1a. Stable across platforms; used for doc ids and mock hashing.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

/// Percent-encodes every byte outside the RFC 3986 unreserved set.
std::string percent_encode(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace ragqa::text
