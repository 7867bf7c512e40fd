#pragma once

#include <string>
#include <string_view>

#include "ragqa/acquisition/crawler.hpp"
#include "ragqa/extraction/document.hpp"

namespace ragqa::extraction {

/// Visible text of an HTML page. Drops script/style bodies and nav, header
/// and footer regions; block elements end a line; whitespace inside a line
/// collapses to one space. Title comes from the first <title>.
CleanDocument html_to_text(const acquisition::RawDocument& raw, std::string_view source_path,
                           Category category = Category::html);

/// Text layer of a PDF with pages separated by '\f'. Title is the document
/// info title, else the file name stem of `source_path`. Throws FormatError
/// naming `source_path` for encrypted or corrupt files.
CleanDocument pdf_to_text(const acquisition::RawDocument& raw, std::string_view source_path,
                          Category category = Category::pdf);

/// Lower-level helpers, exposed for tests.
struct HtmlText {
    std::string title;
    std::string text;
};
HtmlText extract_html(std::string_view utf8_html);

}  // namespace ragqa::extraction
