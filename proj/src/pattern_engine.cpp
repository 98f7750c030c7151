#include "stratforge/pattern_engine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "stratforge/error.hpp"

namespace stratforge {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// longest-match-first operator table
const std::vector<std::string>& multi_puncts() {
    static const std::vector<std::string> ops = {
        "<<=", ">>=", "->*", "...", "::", "->", "++", "--", "<<", ">>", "<=", ">=",
        "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##", ".*",
    };
    return ops;
}

struct Cursor {
    const std::string& src;
    size_t i = 0;
    int line = 1;
    int col = 1;

    explicit Cursor(const std::string& s) : src(s) {}
    bool done() const { return i >= src.size(); }
    char peek(size_t ahead = 0) const {
        return i + ahead < src.size() ? src[i + ahead] : '\0';
    }
    void advance() {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }
};

std::vector<Token> tokenize(const std::string& src, bool pattern_mode) {
    std::vector<Token> out;
    Cursor c(src);
    while (!c.done()) {
        char ch = c.peek();
        if (std::isspace(static_cast<unsigned char>(ch))) {
            c.advance();
            continue;
        }
        if (ch == '/' && c.peek(1) == '/') {
            while (!c.done() && c.peek() != '\n') c.advance();
            continue;
        }
        if (ch == '/' && c.peek(1) == '*') {
            c.advance();
            c.advance();
            while (!c.done() && !(c.peek() == '*' && c.peek(1) == '/')) c.advance();
            if (!c.done()) {
                c.advance();
                c.advance();
            }
            continue;
        }

        Token t;
        t.line = c.line;
        t.col = c.col;

        if (ch == '"' || ch == '\'') {
            char quote = ch;
            t.kind = quote == '"' ? Token::Kind::Str : Token::Kind::Chr;
            t.text.push_back(quote);
            c.advance();
            while (!c.done() && c.peek() != quote) {
                if (c.peek() == '\\' && c.i + 1 < src.size()) {
                    t.text.push_back(c.peek());
                    c.advance();
                }
                t.text.push_back(c.peek());
                c.advance();
            }
            if (!c.done()) {
                t.text.push_back(quote);
                c.advance();
            }
            out.push_back(std::move(t));
            continue;
        }

        if (pattern_mode && ch == '$') {
            c.advance();
            std::string name;
            while (!c.done() && is_ident_char(c.peek())) {
                name.push_back(c.peek());
                c.advance();
            }
            if (name.empty())
                throw Error("invalid metavariable at line " + std::to_string(t.line) +
                            ": '$' must be followed by a name like $X");
            for (char nc : name)
                if (std::islower(static_cast<unsigned char>(nc)))
                    throw Error("invalid metavariable $" + name +
                                ": metavariable names must be uppercase (e.g. $X, $FUNC)");
            t.kind = Token::Kind::Metavar;
            t.text = "$" + name;
            out.push_back(std::move(t));
            continue;
        }

        if (is_ident_start(ch)) {
            t.kind = Token::Kind::Ident;
            while (!c.done() && is_ident_char(c.peek())) {
                t.text.push_back(c.peek());
                c.advance();
            }
            out.push_back(std::move(t));
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(ch))) {
            t.kind = Token::Kind::Number;
            t.text.push_back(ch);
            c.advance();
            while (!c.done()) {
                char p = c.peek();
                bool exp_sign = (p == '+' || p == '-') &&
                                (t.text.back() == 'e' || t.text.back() == 'E');
                if (!is_ident_char(p) && p != '.' && !exp_sign) break;
                t.text.push_back(p);
                c.advance();
            }
            out.push_back(std::move(t));
            continue;
        }

        // multi-char operator, longest first
        bool matched = false;
        for (const std::string& op : multi_puncts()) {
            if (src.compare(c.i, op.size(), op) == 0) {
                t.kind = op == "..." && pattern_mode ? Token::Kind::Ellipsis : Token::Kind::Punct;
                t.text = op;
                for (size_t k = 0; k < op.size(); ++k) c.advance();
                matched = true;
                break;
            }
        }
        if (matched) {
            out.push_back(std::move(t));
            continue;
        }

        t.kind = Token::Kind::Punct;
        t.text.push_back(ch);
        c.advance();
        out.push_back(std::move(t));
    }
    return out;
}

bool is_opener(const Token& t) {
    return t.kind == Token::Kind::Punct && (t.text == "(" || t.text == "[" || t.text == "{");
}
bool is_closer(const Token& t) {
    return t.kind == Token::Kind::Punct && (t.text == ")" || t.text == "]" || t.text == "}");
}
bool is_punct(const Token& t, const char* s) {
    return t.kind == Token::Kind::Punct && t.text == s;
}

// Backtracking matcher with a hard step budget.
struct Matcher {
    const std::vector<Token>& pat;
    const std::vector<Token>& code;
    std::map<std::string, std::pair<size_t, size_t>> env;  // metavar -> [start, end) in code
    long steps = 0;
    static constexpr long kMaxSteps = 2'000'000;

    Matcher(const std::vector<Token>& p, const std::vector<Token>& c) : pat(p), code(c) {}

    void bump() {
        if (++steps > kMaxSteps)
            throw Error("pattern match exceeded its step budget; simplify the pattern");
    }

    bool tokens_equal(const Token& a, const Token& b) const {
        return a.text == b.text;
    }

    // Spans a metavariable may bind: starting at ci, non-empty, balanced,
    // no top-level ';' ',' '{' '}'. Returns candidate end indexes (exclusive),
    // shortest first.
    std::vector<size_t> metavar_span_ends(size_t ci) const {
        std::vector<size_t> ends;
        int depth = 0;
        size_t k = ci;
        while (k < code.size()) {
            const Token& t = code[k];
            if (depth == 0) {
                if (is_punct(t, ";") || is_punct(t, ",") || is_punct(t, "{") || is_punct(t, "}"))
                    break;
                if (is_closer(t)) break;
            }
            if (is_opener(t)) ++depth;
            else if (is_closer(t)) --depth;
            ++k;
            if (depth == 0) ends.push_back(k);
        }
        return ends;
    }

    bool match_from(size_t pi, size_t ci, size_t& end_ci) {
        bump();
        if (pi == pat.size()) {
            end_ci = ci;
            return true;
        }
        const Token& pt = pat[pi];

        if (pt.kind == Token::Kind::Ellipsis) {
            int depth = 0;
            for (size_t k = ci;; ++k) {
                // Only stop at the ellipsis' own nesting level, so the rest of
                // the pattern cannot bind to a closer inside the elided span.
                if (depth == 0 && match_from(pi + 1, k, end_ci)) return true;
                if (k >= code.size()) return false;
                const Token& t = code[k];
                if (is_closer(t) && depth == 0) return false;  // would unbalance
                if (is_opener(t)) ++depth;
                else if (is_closer(t)) --depth;
            }
        }

        if (pt.kind == Token::Kind::Metavar) {
            auto bound = env.find(pt.text);
            if (bound != env.end()) {
                auto [bs, be] = bound->second;
                size_t len = be - bs;
                if (ci + len > code.size()) return false;
                for (size_t k = 0; k < len; ++k)
                    if (!tokens_equal(code[ci + k], code[bs + k])) return false;
                return match_from(pi + 1, ci + len, end_ci);
            }
            for (size_t end : metavar_span_ends(ci)) {
                env[pt.text] = {ci, end};
                if (match_from(pi + 1, end, end_ci)) return true;
                env.erase(pt.text);
            }
            return false;
        }

        if (ci >= code.size()) return false;
        if (!tokens_equal(code[ci], pt)) return false;
        return match_from(pi + 1, ci + 1, end_ci);
    }
};

std::string render_span(const std::vector<Token>& code, size_t begin, size_t end) {
    std::string out;
    for (size_t i = begin; i < end; ++i) {
        if (i > begin) out.push_back(' ');
        out += code[i].text;
    }
    return out;
}

} // namespace

std::vector<Token> tokenize_code(const std::string& src) {
    return tokenize(src, /*pattern_mode=*/false);
}

std::vector<Token> tokenize_pattern(const std::string& pattern) {
    std::vector<Token> toks = tokenize(pattern, /*pattern_mode=*/true);
    // strip boundary ellipses: they would make match spans meaningless
    size_t b = 0, e = toks.size();
    while (b < e && toks[b].kind == Token::Kind::Ellipsis) ++b;
    while (e > b && toks[e - 1].kind == Token::Kind::Ellipsis) --e;
    std::vector<Token> out(toks.begin() + static_cast<long>(b), toks.begin() + static_cast<long>(e));
    if (out.empty()) throw Error("pattern has no concrete tokens");
    return out;
}

std::vector<PatternMatch> match_pattern(const std::vector<Token>& pattern,
                                        const std::vector<Token>& code) {
    std::vector<PatternMatch> matches;
    for (size_t start = 0; start < code.size(); ++start) {
        Matcher m(pattern, code);
        size_t end_ci = 0;
        if (!m.match_from(0, start, end_ci)) continue;
        if (end_ci <= start) continue;  // zero-width: nothing concrete matched here
        PatternMatch pm;
        pm.start_tok = start;
        pm.end_tok = end_ci - 1;
        pm.start_line = code[start].line;
        pm.end_line = code[end_ci - 1].line;
        for (const auto& [name, span] : m.env)
            pm.bindings[name] = render_span(code, span.first, span.second);
        matches.push_back(std::move(pm));
    }
    return matches;
}

std::vector<RuleFinding> evaluate_rule(const RuleSpec& rule, const std::string& source) {
    std::vector<Token> code = tokenize_code(source);

    auto run = [&](const std::string& p) {
        return match_pattern(tokenize_pattern(p), code);
    };

    std::vector<PatternMatch> candidates;
    switch (rule.clause.kind) {
        case PatternClause::Kind::Single:
            candidates = run(rule.clause.patterns.front());
            break;
        case PatternClause::Kind::AnyOf: {
            std::set<std::pair<size_t, size_t>> seen;
            for (const std::string& p : rule.clause.patterns)
                for (PatternMatch& m : run(p))
                    if (seen.insert({m.start_tok, m.end_tok}).second)
                        candidates.push_back(std::move(m));
            break;
        }
        case PatternClause::Kind::AllOf: {
            candidates = run(rule.clause.patterns.front());
            for (size_t i = 1; i < rule.clause.patterns.size() && !candidates.empty(); ++i) {
                std::vector<PatternMatch> inner = run(rule.clause.patterns[i]);
                std::vector<PatternMatch> kept;
                for (PatternMatch& c : candidates) {
                    bool ok = false;
                    for (const PatternMatch& m : inner)
                        if (m.start_tok >= c.start_tok && m.end_tok <= c.end_tok) {
                            ok = true;
                            break;
                        }
                    if (ok) kept.push_back(std::move(c));
                }
                candidates = std::move(kept);
            }
            for (const std::string& np : rule.clause.not_patterns) {
                if (candidates.empty()) break;
                std::vector<PatternMatch> inner = run(np);
                std::vector<PatternMatch> kept;
                for (PatternMatch& c : candidates) {
                    bool killed = false;
                    for (const PatternMatch& m : inner)
                        if (m.start_tok <= c.end_tok && m.end_tok >= c.start_tok) {
                            killed = true;
                            break;
                        }
                    if (!killed) kept.push_back(std::move(c));
                }
                candidates = std::move(kept);
            }
            break;
        }
    }

    std::set<std::pair<int, int>> line_ranges;
    std::vector<RuleFinding> findings;
    for (const PatternMatch& m : candidates) {
        if (!line_ranges.insert({m.start_line, m.end_line}).second) continue;
        RuleFinding f;
        f.check_id = rule.id;
        f.start_line = m.start_line;
        f.end_line = m.end_line;
        f.start_col = code[m.start_tok].col;
        f.end_col = code[m.end_tok].col + static_cast<int>(code[m.end_tok].text.size());
        findings.push_back(f);
    }
    std::sort(findings.begin(), findings.end(), [](const RuleFinding& a, const RuleFinding& b) {
        if (a.start_line != b.start_line) return a.start_line < b.start_line;
        return a.end_line < b.end_line;
    });
    return findings;
}

} // namespace stratforge
