#pragma once

#include <map>
#include <string>
#include <vector>

#include "stratforge/providers.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

// One corpus entry: a commit as crawled, before any filtering. The corpus is a
// directory of JSON-lines files; each line carries the fields below plus full
// pre/post contents of every changed file.
struct RawCommit {
    std::string repo_id;
    std::string commit_hash;
    std::string message;
    std::string diff;  // unified diff, possibly many files
    std::map<std::string, std::string> files_before;  // path -> content
    std::map<std::string, std::string> files_after;
    Language language = Language::CPP;

    static RawCommit from_json(const json& j, const std::string& ctx);
};

struct ChangedFunction {
    std::string file_path;
    std::string function_name;
    int start_line = 0;  // old-file line range of the changed lines
    int end_line = 0;
};

// One entry per distinct function containing at least one changed line.
// Attribution uses a brace-balance scan of the pre-image when files_before has
// the file, falling back to the hunk header's context hint.
std::vector<ChangedFunction> parse_changed_functions(
    const std::string& diff, const std::map<std::string, std::string>& files_before = {});

// True iff any keyword matches case-insensitively as a whole word.
bool is_optimization_candidate(const std::string& message, const std::vector<std::string>& keywords);

const std::vector<std::string>& default_keywords();

// Asks the provider the fixed yes/no verification prompt; only a leading
// YES/NO token (case-insensitive) parses, anything else counts as false.
bool llm_verify_optimization(const RawCommit& commit, CompletionProvider& provider);

// Duplicates: equal normalized (lowercased, whitespace-stripped) message OR
// equal normalized diff. First occurrence wins; order preserved.
std::vector<CommitRecord> dedupe(const std::vector<CommitRecord>& commits);

struct MineStats {
    int total = 0;
    int keyword_matched = 0;
    int single_function = 0;
    int llm_verified = 0;
    int after_dedupe = 0;
};

// Full mining pass: keyword filter -> single-function filter -> optional LLM
// verify -> CommitRecord extraction (function-granularity diff) -> dedupe.
std::vector<CommitRecord> mine_corpus(const std::vector<RawCommit>& corpus,
                                      const std::vector<std::string>& keywords,
                                      CompletionProvider* verifier,  // nullptr: skip LLM verify
                                      MineStats* stats = nullptr);

// All *.jsonl files under corpus_dir, sorted by filename, concatenated in order.
std::vector<RawCommit> load_corpus(const std::string& corpus_dir);

} // namespace stratforge
