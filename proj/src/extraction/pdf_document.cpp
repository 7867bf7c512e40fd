#include <filesystem>

#include "ragqa/errors.hpp"
#include "ragqa/extraction/extract.hpp"
#include "ragqa/extraction/pdf_text.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::extraction {

CleanDocument pdf_to_text(const acquisition::RawDocument& raw, std::string_view source_path, Category category) {
    pdf::PdfText extracted;
    try {
        extracted = pdf::extract_text(raw.body);
    } catch (const pdf::PdfError& e) {
        throw FormatError(std::string(source_path) + ": " + e.what());
    }

    CleanDocument doc;
    doc.doc_id = doc_id_for(raw.url);
    doc.url = raw.url;
    doc.category = category;
    doc.source_path = std::string(source_path);

    bool any_text = false;
    for (const auto& p : extracted.pages) any_text = any_text || !p.empty();
    if (any_text) {
        std::string joined;
        for (std::size_t i = 0; i < extracted.pages.size(); ++i) {
            if (i > 0) joined.push_back('\f');
            joined += extracted.pages[i];
        }
        bool lossy = false;
        doc.text = text::sanitize_utf8(joined, lossy);
        doc.lossy_decode = lossy;
    }
    if (extracted.title) {
        bool lossy = false;
        doc.title = text::sanitize_utf8(*extracted.title, lossy);
    } else {
        doc.title = std::filesystem::path(std::string(source_path)).stem().string();
    }
    doc.refresh_count();
    return doc;
}

}  // namespace ragqa::extraction
