#pragma once

#include <map>
#include <string>
#include <vector>

#include "stratforge/rule_yaml.hpp"

namespace stratforge {

// Token-level semantic pattern matcher for C/C++ — the matching core behind
// the bundled rule engine. Patterns are token sequences with two wildcard
// forms:
//   $NAME   metavariable: binds one non-empty balanced token span containing
//           no top-level ';', ',', '{' or '}' (an expression-shaped span);
//           repeated occurrences of the same name must bind identical spans
//   ...     ellipsis: any token span, possibly empty, that never unbalances
//           the enclosing brackets
// Matching is whitespace- and comment-insensitive because both pattern and
// target pass through the same tokenizer. Leading/trailing ellipses are
// dropped (they would make match boundaries meaningless).

struct Token {
    enum class Kind { Ident, Number, Str, Chr, Punct, Metavar, Ellipsis };
    Kind kind = Kind::Punct;
    std::string text;
    int line = 1;  // 1-based
    int col = 1;
};

std::vector<Token> tokenize_code(const std::string& src);
std::vector<Token> tokenize_pattern(const std::string& pattern);  // throws Error on bad metavar

struct PatternMatch {
    size_t start_tok = 0;
    size_t end_tok = 0;  // inclusive
    int start_line = 1;
    int end_line = 1;
    std::map<std::string, std::string> bindings;  // metavar -> bound token texts
};

// All matches of the pattern against the token stream; at most one match per
// start token (the lazy-shortest one). Never-terminating searches are cut off
// by a step budget and reported as an Error.
std::vector<PatternMatch> match_pattern(const std::vector<Token>& pattern,
                                        const std::vector<Token>& code);

struct RuleFinding {
    std::string check_id;
    int start_line = 1;
    int end_line = 1;
    int start_col = 1;
    int end_col = 1;
};

// Full clause evaluation against one file's source text:
//   Single     — the pattern's matches
//   AnyOf      — union of the alternatives' matches
//   AllOf      — first positive pattern's matches, kept only if every further
//                positive matches inside the candidate span; a pattern-not
//                match intersecting the span kills the candidate
// Findings are deduped by line range and sorted.
std::vector<RuleFinding> evaluate_rule(const RuleSpec& rule, const std::string& source);

} // namespace stratforge
