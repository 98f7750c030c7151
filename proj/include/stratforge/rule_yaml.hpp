#pragma once

#include <string>
#include <vector>

namespace stratforge {

// Supported subset of the rule-engine YAML schema: a top-level `rules:` list;
// each rule needs `id`, `languages`, `severity`, `message`, and exactly one of
// `pattern`, `patterns` (all-of with optional `pattern-not` entries), or
// `pattern-either` (any-of). Anything else is a parse error whose message
// doubles as agent repair feedback.
struct PatternClause {
    enum class Kind { Single, AllOf, AnyOf };
    Kind kind = Kind::Single;
    std::vector<std::string> patterns;      // Single: 1 entry; AnyOf: alternatives; AllOf: positives
    std::vector<std::string> not_patterns;  // AllOf only
};

struct RuleSpec {
    std::string id;
    std::vector<std::string> languages;  // "c", "cpp" (aliases c++ accepted)
    std::string severity;                // ERROR | WARNING | INFO
    std::string message;
    PatternClause clause;
};

// Multi-rule config (what the engine binary accepts). Throws Error with a
// precise diagnostic.
std::vector<RuleSpec> parse_rules_config(const std::string& yaml_text);

// Exactly-one-rule form used when validating generated candidates.
RuleSpec parse_single_rule(const std::string& yaml_text);

// Canonical emission: fixed key order, block style. parse(emit(r)) == r.
std::string emit_rule_yaml(const RuleSpec& rule);
std::string emit_rules_config(const std::vector<RuleSpec>& rules);

// Parse, replace the id, re-emit canonically.
std::string rewrite_rule_id(const std::string& yaml_text, const std::string& new_id);

// Canonical emission with the id blanked — the within-cluster dedup key, so
// the same rule text from different attempts collapses despite distinct ids.
std::string rule_dedupe_key(const std::string& yaml_text);

} // namespace stratforge
