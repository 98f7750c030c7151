#include "stratforge/function_scan.hpp"

#include <cctype>
#include <set>

#include "stratforge/text.hpp"

namespace stratforge {

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Keywords that can directly precede a '(' without naming a function.
const std::set<std::string>& non_name_keywords() {
    static const std::set<std::string> kw = {
        "if", "for", "while", "switch", "catch", "return",  "sizeof",
        "alignof", "decltype", "noexcept", "throw", "defined", "int",
        "char", "bool", "float", "double", "long", "short", "void",
        "unsigned", "signed", "auto", "const", "new", "delete", "assert",
        "static_assert",
    };
    return kw;
}

// First token of a statement that marks a brace-block container, not a function.
const std::set<std::string>& container_keywords() {
    static const std::set<std::string> kw = {"namespace", "extern", "typedef", "using"};
    return kw;
}

struct StmtChar {
    char c;
    int line;
};

std::string first_token(const std::vector<StmtChar>& stmt) {
    size_t i = 0;
    while (i < stmt.size() && std::isspace(static_cast<unsigned char>(stmt[i].c))) ++i;
    std::string tok;
    while (i < stmt.size() && is_ident_char(stmt[i].c)) tok.push_back(stmt[i++].c);
    return tok;
}

// If stmt looks like `ret-type qualified::name(args) trailers`, return the
// qualified name and the line it sits on.
bool extract_function_name(const std::vector<StmtChar>& stmt, std::string& name, int& line) {
    int depth = 0;
    for (size_t i = 0; i < stmt.size(); ++i) {
        char c = stmt[i].c;
        if (c == ')') {
            --depth;
            continue;
        }
        if (c != '(') continue;
        if (depth++ != 0) continue;
        // walk back over whitespace to the candidate name
        size_t j = i;
        while (j > 0 && std::isspace(static_cast<unsigned char>(stmt[j - 1].c))) --j;
        if (j == 0) continue;
        size_t end = j;
        // operator overloads: symbols preceded by the keyword `operator`
        if (!is_ident_char(stmt[j - 1].c)) {
            size_t sym_end = j;
            while (j > 0 && !is_ident_char(stmt[j - 1].c) &&
                   !std::isspace(static_cast<unsigned char>(stmt[j - 1].c)))
                --j;
            size_t kw_end = j;
            size_t kw_begin = j;
            while (kw_begin > 0 && is_ident_char(stmt[kw_begin - 1].c)) --kw_begin;
            std::string kw;
            for (size_t k = kw_begin; k < kw_end; ++k) kw.push_back(stmt[k].c);
            if (kw != "operator") continue;
            name.clear();
            for (size_t k = kw_begin; k < sym_end; ++k) name.push_back(stmt[k].c);
            line = stmt[kw_begin].line;
            return true;
        }
        // plain (possibly qualified) identifier, with optional leading '~'
        size_t begin = j;
        while (begin > 0) {
            char p = stmt[begin - 1].c;
            if (is_ident_char(p) || p == '~') {
                --begin;
                continue;
            }
            if (p == ':' && begin >= 2 && stmt[begin - 2].c == ':') {
                begin -= 2;
                continue;
            }
            break;
        }
        if (begin == end) continue;
        std::string candidate;
        for (size_t k = begin; k < end; ++k) candidate.push_back(stmt[k].c);
        // last path segment decides keyword-ness
        std::string last = candidate;
        size_t sep = last.rfind("::");
        if (sep != std::string::npos) last = last.substr(sep + 2);
        if (non_name_keywords().count(last)) continue;
        if (last.empty() || std::isdigit(static_cast<unsigned char>(last[0]))) continue;
        name = candidate;
        line = stmt[begin].line;
        return true;
    }
    return false;
}

} // namespace

std::vector<FunctionSpan> scan_functions(const std::string& code) {
    enum class State { Code, LineComment, BlockComment, Str, Chr };
    State state = State::Code;
    int line = 1;
    int depth = 0;
    bool in_function = false;
    int fn_depth = 0;
    FunctionSpan current;
    std::vector<FunctionSpan> spans;
    std::vector<StmtChar> stmt;
    bool at_line_start = true;
    bool in_preproc = false;

    for (size_t i = 0; i < code.size(); ++i) {
        char c = code[i];
        char next = i + 1 < code.size() ? code[i + 1] : '\0';

        if (c == '\n') {
            ++line;
            if (state == State::LineComment) state = State::Code;
            if (in_preproc && (i == 0 || code[i - 1] != '\\')) in_preproc = false;
            at_line_start = true;
            if (state == State::Code && !in_function && !in_preproc) stmt.push_back({' ', line});
            continue;
        }

        switch (state) {
            case State::LineComment:
                continue;
            case State::BlockComment:
                if (c == '*' && next == '/') {
                    state = State::Code;
                    ++i;
                }
                continue;
            case State::Str:
                if (c == '\\') ++i;
                else if (c == '"') state = State::Code;
                continue;
            case State::Chr:
                if (c == '\\') ++i;
                else if (c == '\'') state = State::Code;
                continue;
            case State::Code:
                break;
        }

        if (at_line_start && c == '#') {
            in_preproc = true;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) at_line_start = false;
        if (in_preproc) continue;

        if (c == '/' && next == '/') {
            state = State::LineComment;
            ++i;
            continue;
        }
        if (c == '/' && next == '*') {
            state = State::BlockComment;
            ++i;
            continue;
        }
        if (c == '"') {
            state = State::Str;
            if (!in_function) stmt.push_back({'"', line});
            continue;
        }
        if (c == '\'') {
            state = State::Chr;
            continue;
        }

        if (c == '{') {
            if (!in_function) {
                std::string ft = first_token(stmt);
                std::string name;
                int name_line = 0;
                if (!container_keywords().count(ft) && extract_function_name(stmt, name, name_line)) {
                    in_function = true;
                    fn_depth = depth;
                    current = FunctionSpan{name, name_line, 0, line};
                }
                stmt.clear();
            }
            ++depth;
            continue;
        }
        if (c == '}') {
            --depth;
            if (in_function && depth == fn_depth) {
                current.end_line = line;
                spans.push_back(current);
                in_function = false;
            }
            stmt.clear();
            continue;
        }
        if (c == ';') {
            if (!in_function) stmt.clear();
            continue;
        }
        if (!in_function) stmt.push_back({c, line});
    }
    return spans;
}

std::string function_at_line(const std::vector<FunctionSpan>& spans, int line) {
    for (const FunctionSpan& s : spans)
        if (s.start_line <= line && line <= s.end_line) return s.name;
    return "";
}

std::string slice_lines(const std::string& code, int start_line, int end_line) {
    std::vector<std::string> lines = split_lines(code);
    std::string out;
    bool final_has_newline = !code.empty() && code.back() == '\n';
    for (int ln = start_line; ln <= end_line && ln <= static_cast<int>(lines.size()); ++ln) {
        out += lines[static_cast<size_t>(ln - 1)];
        if (ln < static_cast<int>(lines.size()) || final_has_newline) out += '\n';
    }
    return out;
}

} // namespace stratforge
