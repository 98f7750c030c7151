#include "stratforge/prompts.hpp"

namespace stratforge {

namespace {
// fenced code with the closing fence always on its own line
std::string fenced(const std::string& body, const std::string& info = "") {
    std::string out = "```" + info + "\n" + body;
    if (body.empty() || body.back() != '\n') out += '\n';
    out += "```\n";
    return out;
}
} // namespace

std::string verify_prompt(const std::string& message, const std::string& diff) {
    return "You are reviewing a git commit. Decide whether it is a genuine performance "
           "optimization of the code (faster execution, lower overhead), as opposed to a "
           "refactor, bug fix, or documentation change.\n\n"
           "Commit message:\n" + message + "\n\n"
           "Diff:\n" + diff + "\n\n"
           "Answer with YES or NO as the first word.\n";
}

std::string summarize_prompt(const CommitRecord& commit) {
    return "Summarize the optimization strategy applied by this commit in one sentence. "
           "Describe the transformation generically so it could apply to other code, "
           "not the specifics of this function.\n\n"
           "Codebase: " + commit.repo_id + "\n"
           "Commit message: " + commit.message + "\n"
           "Modified function: " + commit.function_name + "\n\n"
           "Diff:\n" + commit.diff + "\n\n"
           "Reply with exactly one sentence.\n";
}

std::string understand_prompt(const CommitRecord& commit) {
    return "Analyze the following optimization commit and explain, step by step, what "
           "the optimization strategy is and why it improves performance. Describe the "
           "code pattern that existed before the change. Do NOT generate any Semgrep "
           "rules or YAML in this answer.\n\n"
           "Commit message: " + commit.message + "\n\n"
           "Diff:\n" + commit.diff + "\n\n"
           "Code before the change:\n" + fenced(commit.code_before);
}

std::string generate_prompt(const std::string& analysis_text, const CommitRecord& commit) {
    return "Based on the analysis below, write one Semgrep rule that matches the "
           "pre-optimization code pattern so the same opportunity can be found in other "
           "code. The rule must strictly follow Semgrep YAML syntax: a top-level `rules:` "
           "list with exactly one rule carrying `id`, `languages`, `severity`, `message`, "
           "and a pattern clause (`pattern`, `patterns`, or `pattern-either`). Use "
           "metavariables ($X) and ellipses (...) to generalize. Output exactly one "
           "fenced ```yaml code block and nothing else after it.\n\n"
           "Analysis:\n" + analysis_text + "\n"
           "Code the rule must match:\n" + fenced(commit.code_before);
}

std::string repair_prompt(const std::string& current_rule_yaml, const std::string& error_text,
                          const CommitRecord& commit) {
    std::string rule_part = current_rule_yaml.empty()
                                ? "(no parsable rule was extracted from the previous reply)\n"
                                : fenced(current_rule_yaml, "yaml");
    return "The Semgrep rule below failed validation. Fix it. The corrected rule must "
           "parse, run cleanly, and report at least one finding on the code shown. "
           "Output exactly one fenced ```yaml code block with the full corrected rule.\n\n"
           "Current rule:\n" + rule_part + "\n"
           "Validation error:\n" + error_text + "\n\n"
           "Code the rule must match:\n" + fenced(commit.code_before);
}

std::string optimization_prompt(const std::string& numbered_code, int start_line, int end_line,
                                const std::string& strategy_text, AblationMode mode) {
    std::string p = "The complete code that needs to be optimized, with line number "
                    "annotations:\n\n" + numbered_code + "\n";
    if (mode != AblationMode::NoLocation) {
        p += "The code fragment to optimize spans lines " + std::to_string(start_line) + " to " +
             std::to_string(end_line) + ".\n\n";
    }
    if (mode != AblationMode::NoStrategy) {
        p += "Optimization strategy to apply:\n" + strategy_text + "\n\n";
    }
    p += "Apply the optimization and provide the complete content of the optimized code "
         "in a single fenced code block. Keep the function's behavior identical.\n";
    return p;
}

std::string direct_prompt(const std::string& code) {
    return "Optimize the following code for performance while keeping its behavior "
           "identical. Provide the complete content of the optimized code in a single "
           "fenced code block.\n\n" + fenced(code);
}

std::string rag_prompt(const std::vector<std::pair<std::string, std::string>>& examples_ascending,
                       const std::string& code) {
    std::string p = "Here are examples of performance optimizations, each showing code "
                    "before and after, ordered from least to most similar to the task:\n\n";
    int i = 1;
    for (const auto& [before, after] : examples_ascending) {
        p += "Example " + std::to_string(i) + " before:\n" + fenced(before);
        p += "Example " + std::to_string(i++) + " after:\n" + fenced(after) + "\n";
    }
    p += "Optimize the following code for performance while keeping its behavior "
         "identical. Provide the complete content of the optimized code in a single "
         "fenced code block.\n\n" + fenced(code);
    return p;
}

} // namespace stratforge
