#include "stratforge/normalize.hpp"

#include <cctype>

#include "stratforge/error.hpp"

namespace stratforge {

std::string normalize_code(std::string_view code) {
    enum class State { Code, LineComment, BlockComment, Str, Chr };
    State state = State::Code;
    std::string out;
    out.reserve(code.size());

    for (size_t i = 0; i < code.size(); ++i) {
        char c = code[i];
        char next = i + 1 < code.size() ? code[i + 1] : '\0';
        switch (state) {
            case State::LineComment:
                if (c == '\n') state = State::Code;
                break;
            case State::BlockComment:
                if (c == '*' && next == '/') {
                    state = State::Code;
                    ++i;
                }
                break;
            case State::Str:
                if (c == '\\' && i + 1 < code.size()) {
                    out.push_back(c);
                    out.push_back(next);
                    ++i;
                    break;
                }
                if (c == '"') state = State::Code;
                if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
                break;
            case State::Chr:
                if (c == '\\' && i + 1 < code.size()) {
                    out.push_back(c);
                    out.push_back(next);
                    ++i;
                    break;
                }
                if (c == '\'') state = State::Code;
                if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
                break;
            case State::Code:
                if (c == '/' && next == '/') {
                    state = State::LineComment;
                    ++i;
                    break;
                }
                if (c == '/' && next == '*') {
                    state = State::BlockComment;
                    ++i;
                    break;
                }
                if (c == '"') {
                    state = State::Str;
                    out.push_back(c);
                    break;
                }
                if (c == '\'') {
                    state = State::Chr;
                    out.push_back(c);
                    break;
                }
                if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
                break;
        }
    }
    if (state == State::BlockComment)
        log_warn("normalize_code: unterminated block comment stripped to end of input");
    return out;
}

bool exact_match(std::string_view generated, std::string_view ground_truth) {
    return normalize_code(generated) == normalize_code(ground_truth);
}

} // namespace stratforge
