#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragqa::generation {

/// Prompt text with `{question}` and `{context}` slots.
class QAPromptTemplate {
public:
    /// Throws ValidationError unless both slots are present.
    explicit QAPromptTemplate(std::string text);

    static QAPromptTemplate default_template();
    static QAPromptTemplate from_file(const std::filesystem::path& path);

    const std::string& text() const noexcept { return text_; }

    /// Plain slot substitution; values are inserted verbatim and never re-scanned.
    std::string fill(std::string_view question, std::string_view context) const;

private:
    std::string text_;
};

/// The shipped generation prompt (Llama-2 chat layout, 50-word instruction).
extern const std::string_view kDefaultQaTemplate;
/// Supervised fine-tuning layout with the answer appended after [/INST].
extern const std::string_view kFinetuneTemplate;

struct RenderedPrompt {
    std::string text;
    std::size_t contexts_used = 0;
    bool truncated = false;
};

constexpr std::string_view kContextSeparator = "\n\n";

/// Contexts joined by a blank line in rank order. With a non-zero
/// char_budget (Unicode scalar values), whole contexts are dropped from the
/// tail until the prompt fits. Throws ValidationError for an empty question.
RenderedPrompt render_qa_prompt(std::string_view question, const std::vector<std::string>& contexts,
                                const QAPromptTemplate& tmpl, std::size_t char_budget = 0);

std::string render_finetune_record(std::string_view question, std::string_view context, std::string_view answer);

}  // namespace ragqa::generation
