#pragma once

#include <string>
#include <vector>

#include "stratforge/types.hpp"

namespace stratforge {

struct RawCommit;  // miner.hpp

// Every prompt is a pure function of its inputs, byte-stable across runs —
// replay scripts key on SHA-256 of the exact prompt text.

// Yes/no check that a keyword-matched commit really is a performance change.
std::string verify_prompt(const std::string& message, const std::string& diff);

// One-sentence strategy summary; carries the codebase name, commit message,
// modified function name, and the complete diff.
std::string summarize_prompt(const CommitRecord& commit);

// Phase 1 of rule synthesis: explain the optimization; rules are explicitly
// forbidden at this phase.
std::string understand_prompt(const CommitRecord& commit);

// Phase 2: produce one fenced YAML rule for the pre-commit code.
std::string generate_prompt(const std::string& analysis_text, const CommitRecord& commit);

// Phase 3 feedback: current candidate (possibly empty), the engine or
// extraction error, and the code the rule must match.
std::string repair_prompt(const std::string& current_rule_yaml, const std::string& error_text,
                          const CommitRecord& commit);

// Four-part optimization prompt; parts 2 and 3 drop out under the ablations.
std::string optimization_prompt(const std::string& numbered_code, int start_line, int end_line,
                                const std::string& strategy_text, AblationMode mode);

// Baselines for the benchmark harness.
std::string direct_prompt(const std::string& code);
std::string rag_prompt(const std::vector<std::pair<std::string, std::string>>& examples_ascending,
                       const std::string& code);

} // namespace stratforge
