#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ragqa::pdf {

class PdfError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PdfText {
    std::vector<std::string> pages;    // one entry per page, in page-tree order
    std::optional<std::string> title;  // document info /Title, UTF-8
};

/// Text-layer extraction from an unencrypted PDF. Handles classic and
/// compressed (object stream) layouts, Flate/ASCIIHex/ASCII85 filters,
/// ToUnicode CMaps, simple font encodings and form XObjects. Throws PdfError
/// for encrypted or structurally unusable files.
PdfText extract_text(std::string_view bytes);

}  // namespace ragqa::pdf
