#include "stratforge/rule_yaml.hpp"

#include <cctype>
#include <set>

#include <yaml-cpp/yaml.h>

#include "stratforge/error.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace {

std::string normalize_language(const std::string& lang) {
    std::string l = to_lower(lang);
    if (l == "c") return "c";
    if (l == "cpp" || l == "c++" || l == "cxx") return "cpp";
    throw Error("unsupported language '" + lang + "' (this engine handles c and cpp)");
}

std::string require_scalar(const YAML::Node& rule, const char* key, size_t rule_idx) {
    const YAML::Node n = rule[key];
    if (!n)
        throw Error("rule " + std::to_string(rule_idx + 1) + " is missing '" + key + "'");
    if (!n.IsScalar())
        throw Error("rule " + std::to_string(rule_idx + 1) + ": '" + key + "' must be a scalar");
    return n.as<std::string>();
}

// Patterns are token sequences; trailing whitespace is insignificant and YAML
// literal blocks append a newline, so strip it for a stable parse/emit cycle.
std::string clean_pattern(const std::string& p, const std::string& ctx) {
    size_t e = p.size();
    while (e > 0 && std::isspace(static_cast<unsigned char>(p[e - 1]))) --e;
    if (e == 0) throw Error(ctx + ": empty pattern");
    return p.substr(0, e);
}

PatternClause parse_clause(const YAML::Node& rule, size_t rule_idx) {
    const char* ctx_num = "rule ";
    std::string ctx = ctx_num + std::to_string(rule_idx + 1);
    int present = 0;
    for (const char* k : {"pattern", "patterns", "pattern-either"})
        if (rule[k]) ++present;
    if (present == 0)
        throw Error(ctx + " must define one of 'pattern', 'patterns', or 'pattern-either'");
    if (present > 1)
        throw Error(ctx + " defines more than one pattern clause; use exactly one of "
                          "'pattern', 'patterns', 'pattern-either'");

    PatternClause clause;
    if (rule["pattern"]) {
        if (!rule["pattern"].IsScalar()) throw Error(ctx + ": 'pattern' must be a string");
        clause.kind = PatternClause::Kind::Single;
        clause.patterns.push_back(clean_pattern(rule["pattern"].as<std::string>(), ctx));
        return clause;
    }
    if (rule["patterns"]) {
        const YAML::Node list = rule["patterns"];
        if (!list.IsSequence()) throw Error(ctx + ": 'patterns' must be a list");
        clause.kind = PatternClause::Kind::AllOf;
        for (const YAML::Node& item : list) {
            if (!item.IsMap())
                throw Error(ctx + ": each 'patterns' entry must be a map with "
                                  "'pattern' or 'pattern-not'");
            if (item["pattern"] && item["pattern-not"])
                throw Error(ctx + ": a 'patterns' entry cannot hold both "
                                  "'pattern' and 'pattern-not'");
            if (item["pattern"]) {
                clause.patterns.push_back(clean_pattern(item["pattern"].as<std::string>(), ctx));
            } else if (item["pattern-not"]) {
                clause.not_patterns.push_back(
                    clean_pattern(item["pattern-not"].as<std::string>(), ctx));
            } else {
                throw Error(ctx + ": 'patterns' entry has neither 'pattern' nor 'pattern-not'");
            }
        }
        if (clause.patterns.empty())
            throw Error(ctx + ": 'patterns' needs at least one positive 'pattern'");
        return clause;
    }
    const YAML::Node list = rule["pattern-either"];
    if (!list.IsSequence()) throw Error(ctx + ": 'pattern-either' must be a list");
    clause.kind = PatternClause::Kind::AnyOf;
    for (const YAML::Node& item : list) {
        if (!item.IsMap() || !item["pattern"])
            throw Error(ctx + ": each 'pattern-either' entry must be a map with 'pattern'");
        clause.patterns.push_back(clean_pattern(item["pattern"].as<std::string>(), ctx));
    }
    if (clause.patterns.empty()) throw Error(ctx + ": 'pattern-either' is empty");
    return clause;
}

} // namespace

std::vector<RuleSpec> parse_rules_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw Error(std::string("invalid YAML: ") + e.what());
    }
    if (!root.IsMap() || !root["rules"])
        throw Error("config has no top-level 'rules' key");
    const YAML::Node rules = root["rules"];
    if (!rules.IsSequence()) throw Error("'rules' must be a list");
    if (rules.size() == 0) throw Error("'rules' list is empty");

    static const std::set<std::string> severities = {"ERROR", "WARNING", "INFO"};
    std::vector<RuleSpec> out;
    for (size_t i = 0; i < rules.size(); ++i) {
        const YAML::Node r = rules[i];
        if (!r.IsMap()) throw Error("rule " + std::to_string(i + 1) + " must be a map");
        RuleSpec spec;
        spec.id = require_scalar(r, "id", i);
        if (spec.id.empty()) throw Error("rule " + std::to_string(i + 1) + " has an empty id");
        const YAML::Node langs = r["languages"];
        if (!langs || !langs.IsSequence() || langs.size() == 0)
            throw Error("rule " + std::to_string(i + 1) +
                        " is missing 'languages' (a non-empty list)");
        for (const YAML::Node& l : langs)
            spec.languages.push_back(normalize_language(l.as<std::string>()));
        spec.severity = require_scalar(r, "severity", i);
        if (!severities.count(spec.severity))
            throw Error("rule " + std::to_string(i + 1) + ": severity '" + spec.severity +
                        "' is not one of ERROR, WARNING, INFO");
        spec.message = require_scalar(r, "message", i);
        spec.clause = parse_clause(r, i);
        out.push_back(std::move(spec));
    }
    return out;
}

RuleSpec parse_single_rule(const std::string& yaml_text) {
    std::vector<RuleSpec> rules = parse_rules_config(yaml_text);
    if (rules.size() != 1)
        throw Error("expected exactly one rule, found " + std::to_string(rules.size()));
    return rules[0];
}

namespace {
void emit_rule(YAML::Emitter& e, const RuleSpec& rule) {
    e << YAML::BeginMap;
    e << YAML::Key << "id" << YAML::Value << rule.id;
    e << YAML::Key << "languages" << YAML::Value << YAML::BeginSeq;
    for (const std::string& l : rule.languages) e << l;
    e << YAML::EndSeq;
    e << YAML::Key << "message" << YAML::Value << rule.message;
    e << YAML::Key << "severity" << YAML::Value << rule.severity;
    switch (rule.clause.kind) {
        case PatternClause::Kind::Single:
            e << YAML::Key << "pattern" << YAML::Value << YAML::Literal
              << rule.clause.patterns.front();
            break;
        case PatternClause::Kind::AllOf:
            e << YAML::Key << "patterns" << YAML::Value << YAML::BeginSeq;
            for (const std::string& p : rule.clause.patterns) {
                e << YAML::BeginMap << YAML::Key << "pattern" << YAML::Value << YAML::Literal << p
                  << YAML::EndMap;
            }
            for (const std::string& p : rule.clause.not_patterns) {
                e << YAML::BeginMap << YAML::Key << "pattern-not" << YAML::Value << YAML::Literal
                  << p << YAML::EndMap;
            }
            e << YAML::EndSeq;
            break;
        case PatternClause::Kind::AnyOf:
            e << YAML::Key << "pattern-either" << YAML::Value << YAML::BeginSeq;
            for (const std::string& p : rule.clause.patterns) {
                e << YAML::BeginMap << YAML::Key << "pattern" << YAML::Value << YAML::Literal << p
                  << YAML::EndMap;
            }
            e << YAML::EndSeq;
            break;
    }
    e << YAML::EndMap;
}
} // namespace

std::string emit_rules_config(const std::vector<RuleSpec>& rules) {
    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "rules" << YAML::Value << YAML::BeginSeq;
    for (const RuleSpec& r : rules) emit_rule(e, r);
    e << YAML::EndSeq;
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

std::string emit_rule_yaml(const RuleSpec& rule) {
    return emit_rules_config({rule});
}

std::string rewrite_rule_id(const std::string& yaml_text, const std::string& new_id) {
    RuleSpec rule = parse_single_rule(yaml_text);
    rule.id = new_id;
    return emit_rule_yaml(rule);
}

std::string rule_dedupe_key(const std::string& yaml_text) {
    RuleSpec rule = parse_single_rule(yaml_text);
    rule.id = "<ID>";
    return emit_rule_yaml(rule);
}

} // namespace stratforge
