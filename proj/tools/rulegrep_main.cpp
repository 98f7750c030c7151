// rulegrep: a small semantic-pattern scanner with a subset of the Semgrep
// CLI surface — `rulegrep --config rules.yaml --json file.c ...` — so it can
// sit behind anything that drives Semgrep that way. Exit codes: 0 = scan
// completed (with or without findings), 1 = a target could not be read,
// 2 = the rule config is invalid.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stratforge/error.hpp"
#include "stratforge/json_io.hpp"
#include "stratforge/pattern_engine.hpp"
#include "stratforge/rule_yaml.hpp"
#include "stratforge/text.hpp"
#include "stratforge/version.hpp"

using namespace stratforge;

int main(int argc, char** argv) {
    CLI::App app{"rulegrep: pattern-rule scanner for C/C++"};
    std::string config_path;
    bool as_json = false;
    std::vector<std::string> targets;
    app.add_option("--config", config_path, "rule config (YAML)")->required();
    app.add_flag("--json", as_json, "emit findings as JSON on stdout");
    app.add_option("targets", targets, "source files to scan")->required();
    app.set_version_flag("--version", std::string("rulegrep ") + kVersion);
    CLI11_PARSE(app, argc, argv);

    std::vector<RuleSpec> rules;
    try {
        rules = parse_rules_config(read_text_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "rulegrep: config error: " << e.what() << "\n";
        return 2;
    }

    // Pattern syntax problems (bad metavariable, no concrete tokens) are
    // config errors too; surface them before touching any target.
    for (const RuleSpec& rule : rules) {
        try {
            for (const std::string& p : rule.clause.patterns) tokenize_pattern(p);
            for (const std::string& p : rule.clause.not_patterns) tokenize_pattern(p);
        } catch (const std::exception& e) {
            std::cerr << "rulegrep: config error: rule '" << rule.id << "': " << e.what() << "\n";
            return 2;
        }
    }

    json results = json::array();
    for (const std::string& target : targets) {
        std::string source;
        try {
            source = read_text_file(target);
        } catch (const std::exception& e) {
            std::cerr << "rulegrep: " << e.what() << "\n";
            return 1;
        }
        for (const RuleSpec& rule : rules) {
            std::vector<RuleFinding> findings;
            try {
                findings = evaluate_rule(rule, source);
            } catch (const std::exception& e) {
                std::cerr << "rulegrep: rule '" << rule.id << "' failed on " << target << ": "
                          << e.what() << "\n";
                return 2;
            }
            for (const RuleFinding& f : findings) {
                results.push_back(json{
                    {"check_id", f.check_id},
                    {"path", target},
                    {"start", json{{"line", f.start_line}, {"col", f.start_col}}},
                    {"end", json{{"line", f.end_line}, {"col", f.end_col}}},
                    {"extra", json{{"message", rule.message}, {"severity", rule.severity}}}});
            }
        }
    }

    if (as_json) {
        std::cout << dump_canonical(json{{"results", results}, {"errors", json::array()}});
    } else {
        for (const json& r : results)
            std::cout << r["path"].get<std::string>() << ":" << r["start"]["line"].get<int>()
                      << "-" << r["end"]["line"].get<int>() << ": " << r["check_id"].get<std::string>()
                      << ": " << r["extra"]["message"].get<std::string>() << "\n";
        std::cout << results.size() << " finding(s)\n";
    }
    return 0;
}
