#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ragqa/chunking/chunker.hpp"
#include "ragqa/errors.hpp"

namespace ragqa::annotation {

/// The reading-comprehension annotation prompt with {num_qas} and {text}
/// filled in. Throws ValidationError when num_qas < 1.
std::string build_annotation_prompt(std::string_view chunk_text, std::size_t num_qas);
std::string build_annotation_prompt(const chunking::Chunk& chunk, std::size_t num_qas);

struct QA {
    std::string question;
    std::string answer;

    bool operator==(const QA&) const = default;
};

struct ParsedResponse {
    std::vector<QA> pairs;
    std::size_t dropped = 0;  // entries missing a field or with an empty value
};

/// No balanced JSON array could be found in the model output.
class QaParseError : public FormatError {
public:
    QaParseError(const std::string& what, std::string raw) : FormatError(what), raw_(std::move(raw)) {}
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

/// Strips code fences, then takes the first `[` whose balanced `]`
/// (string-literal aware) encloses a JSON array, and keeps every element
/// with non-empty "question" and "answer" strings (trimmed).
ParsedResponse parse_qa_response(std::string_view raw);

/// Template layout of a pair list, as the annotator is asked to produce it.
std::string format_qa_array(const std::vector<QA>& pairs);

}  // namespace ragqa::annotation
