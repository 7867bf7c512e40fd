#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ragqa/extraction/document.hpp"

namespace ragqa::extraction {

/// The shipped default keyword list: eight terms, each in lower and capitalized form.
const std::vector<std::string>& default_keywords();

/// One keyword per line; blank lines and `#` comments skipped.
std::vector<std::string> parse_keyword_file(std::string_view contents);

/// Case-sensitive substring match over title and text. Papers always pass.
/// Throws ValidationError on an empty keyword list.
FilterVerdict relevance_filter(const CleanDocument& doc, const std::vector<std::string>& keywords);

constexpr std::size_t kDefaultMinChars = 200;
constexpr std::string_view kErrorTitle = "Page_not_found";

/// too_short when char_count < min_chars, else error_page when the title contains "Page_not_found".
FilterVerdict quality_filter(const CleanDocument& doc, std::size_t min_chars = kDefaultMinChars);

/// Relevance, then quality. The first failing filter names the reason.
FilterVerdict apply_filters(const CleanDocument& doc, const std::vector<std::string>& keywords,
                            std::size_t min_chars = kDefaultMinChars);

/// Removes lines that repeat verbatim across a large share of one host's
/// html pages (site headers, menus rendered outside <nav>). Only hosts with
/// at least 3 pages are touched; a line goes when it appears on at least
/// max(2, ceil(share * pages)) of them. Returns the number of lines removed.
std::size_t strip_boilerplate_lines(std::vector<CleanDocument>& docs, double share = 0.3);

}  // namespace ragqa::extraction
