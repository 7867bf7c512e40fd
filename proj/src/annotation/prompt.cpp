#include "ragqa/annotation/prompt.hpp"

#include <spdlog/spdlog.h>

#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::annotation {
namespace {

constexpr std::string_view kHead =
    "### Instruction:\n"
    "You are a smart assistant designed to help high school teachers come up with reading comprehension "
    "questions.\n"
    "Given a piece of text, you must come up with ";

constexpr std::string_view kMiddle =
    " question and answer pairs that can be used to test a student's reading comprehension abilities.\n"
    "The questions you generated should be specific to the text and should not be too general.\n"
    "When coming up with question/answer pairs, you must respond in the following format:\n"
    "```\n"
    "[\n"
    "    {\n"
    "        \"question\": \"$YOUR_QUESTION_HERE\",\n"
    "        \"answer\": \"$THE_ANSWER_HERE\"\n"
    "    },\n"
    "    {\n"
    "        \"question\": \"$YOUR_SECOND_QUESTION_HERE\",\n"
    "        \"answer\": \"$THE_SECOND_ANSWER_HERE\"\n"
    "    }\n"
    "]\n"
    "```\n"
    "Everything between the ``` must be valid array.\n"
    "\n"
    "Please come up with ";

constexpr std::string_view kTail =
    " question/answer pairs, in the specified JSON format, for the following text:\n"
    "----------------\n";

constexpr std::string_view kResponse = "\n### Response:";

std::string strip_fences(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw.substr(i, 3) == "```") {
            i += 3;
            // Drop a language tag such as ```json.
            std::size_t j = i;
            while (j < raw.size() && std::isalpha(static_cast<unsigned char>(raw[j]))) ++j;
            if (j - i <= 10) i = j;
            out.push_back('\n');
            continue;
        }
        out.push_back(raw[i++]);
    }
    return out;
}

// Index one past the `]` matching the `[` at `open`, or npos.
std::size_t balanced_end(std::string_view s, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

}  // namespace

std::string build_annotation_prompt(std::string_view chunk_text, std::size_t num_qas) {
    if (num_qas < 1) throw ValidationError("num_qas must be at least 1");
    const std::string n = std::to_string(num_qas);
    std::string out;
    out.reserve(kHead.size() + kMiddle.size() + kTail.size() + chunk_text.size() + 32);
    out.append(kHead).append(n).append(kMiddle).append(n).append(kTail).append(chunk_text).append(kResponse);
    return out;
}

std::string build_annotation_prompt(const chunking::Chunk& chunk, std::size_t num_qas) {
    return build_annotation_prompt(chunk.text, num_qas);
}

ParsedResponse parse_qa_response(std::string_view raw) {
    const std::string cleaned = strip_fences(raw);
    const std::string_view s(cleaned);

    bool found_balanced = false;
    for (std::size_t open = s.find('['); open != std::string_view::npos; open = s.find('[', open + 1)) {
        const std::size_t end = balanced_end(s, open);
        if (end == std::string_view::npos) continue;
        found_balanced = true;
        json arr;
        try {
            arr = json::parse(s.substr(open, end - open));
        } catch (const json::exception&) {
            continue;  // e.g. "[1]" footnote markers before the real array
        }
        if (!arr.is_array()) continue;

        ParsedResponse out;
        for (const auto& item : arr) {
            const bool shaped = item.is_object() && item.contains("question") && item.contains("answer") &&
                                item["question"].is_string() && item["answer"].is_string();
            if (!shaped) {
                ++out.dropped;
                continue;
            }
            QA qa{std::string(text::trim(item["question"].get<std::string>())),
                  std::string(text::trim(item["answer"].get<std::string>()))};
            if (qa.question.empty() || qa.answer.empty()) {
                ++out.dropped;
                continue;
            }
            out.pairs.push_back(std::move(qa));
        }
        if (out.pairs.empty()) spdlog::warn("annotator response held an array with no usable pairs");
        return out;
    }
    throw QaParseError(found_balanced ? "no parseable JSON array in annotator response"
                                      : "no balanced JSON array in annotator response",
                       std::string(raw));
}

std::string format_qa_array(const std::vector<QA>& pairs) {
    json arr = json::array();
    for (const auto& p : pairs) arr.push_back({{"question", p.question}, {"answer", p.answer}});
    return arr.dump(4);
}

}  // namespace ragqa::annotation
