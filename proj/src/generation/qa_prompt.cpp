#include "ragqa/generation/qa_prompt.hpp"

#include "ragqa/errors.hpp"
#include "ragqa/util/json_io.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::generation {

// Trailing spaces after <</SYS>>, {question} and {context} are part of the layout.
const std::string_view kDefaultQaTemplate =
    "[INST]<<SYS>> You are an assistant for question-answering tasks. Use the following pieces of retrieved "
    "context to answer the question. If you don't know the answer, just say that you don't know. Use 50 words "
    "maximum and keep the answer concise.<</SYS>> \n"
    "Question: {question} \n"
    "Context: {context} \n"
    "Answer: [/INST]";

const std::string_view kFinetuneTemplate =
    "[INST]<<SYS>> You are an assistant for question-answering tasks. Use the following pieces of retrieved "
    "context to answer the question. If you don't know the answer, just say that you don't know. Summarize your "
    "answer and ensure the answer only contains key points.<</SYS>> \n"
    "Question: {question} \n"
    "Context: \n"
    "{context}\n"
    "Answer: [/INST]\n"
    "{answer}";

namespace {

constexpr std::string_view kQuestionSlot = "{question}";
constexpr std::string_view kContextSlot = "{context}";
constexpr std::string_view kAnswerSlot = "{answer}";

std::string substitute(std::string_view tmpl, std::string_view question, std::string_view context,
                       std::string_view answer) {
    std::string out;
    out.reserve(tmpl.size() + question.size() + context.size() + answer.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        const std::string_view rest = tmpl.substr(i);
        if (rest.starts_with(kQuestionSlot)) {
            out.append(question);
            i += kQuestionSlot.size();
        } else if (rest.starts_with(kContextSlot)) {
            out.append(context);
            i += kContextSlot.size();
        } else if (rest.starts_with(kAnswerSlot)) {
            out.append(answer);
            i += kAnswerSlot.size();
        } else {
            out.push_back(tmpl[i++]);
        }
    }
    return out;
}

}  // namespace

QAPromptTemplate::QAPromptTemplate(std::string text) : text_(std::move(text)) {
    if (text_.find(kQuestionSlot) == std::string::npos || text_.find(kContextSlot) == std::string::npos) {
        throw ValidationError("prompt template needs both {question} and {context} placeholders");
    }
}

QAPromptTemplate QAPromptTemplate::default_template() { return QAPromptTemplate(std::string(kDefaultQaTemplate)); }

QAPromptTemplate QAPromptTemplate::from_file(const std::filesystem::path& path) {
    std::string text = io::read_file(path);
    // Editors usually add a final newline; the shipped layout has none.
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return QAPromptTemplate(std::move(text));
}

std::string QAPromptTemplate::fill(std::string_view question, std::string_view context) const {
    return substitute(text_, question, context, {});
}

RenderedPrompt render_qa_prompt(std::string_view question, const std::vector<std::string>& contexts,
                                const QAPromptTemplate& tmpl, std::size_t char_budget) {
    if (text::trim(question).empty()) throw ValidationError("question is empty");
    RenderedPrompt out;
    for (std::size_t n = contexts.size() + 1; n-- > 0;) {
        std::string joined;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) joined.append(kContextSeparator);
            joined.append(contexts[i]);
        }
        out.text = tmpl.fill(question, joined);
        out.contexts_used = n;
        out.truncated = n < contexts.size();
        if (char_budget == 0 || text::utf8_length(out.text) <= char_budget) break;
    }
    return out;
}

std::string render_finetune_record(std::string_view question, std::string_view context, std::string_view answer) {
    return substitute(kFinetuneTemplate, question, context, answer);
}

}  // namespace ragqa::generation
