#pragma once

#include <string>
#include <vector>

#include "stratforge/library_store.hpp"
#include "stratforge/providers.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

enum class ApproachKind { Direct, RAG, StrategyLib };
std::string approach_name(ApproachKind k);
ApproachKind approach_from_name(const std::string& name);

struct TaskRepeatRecord {
    int repeat_index = 1;
    bool generated = false;  // a code block came back
    bool em = false;
    std::string error;
};

struct TaskRecord {
    std::string repo_id;
    std::string commit_hash;
    bool solved = false;  // any repeat EM-matched
    std::vector<TaskRepeatRecord> repeats;
};

struct BenchReport {
    std::string approach;
    bool degraded = false;
    int repeats = 3;
    int total = 0;
    int solved = 0;
    json parameters = json::object();  // retrieval constants etc., for reproducibility
    std::vector<TaskRecord> tasks;

    json to_json() const;
};

std::vector<BenchTask> load_bench(const std::string& path);  // JSON-lines

// Run every task x repeat under one approach. Leakage rules: the task's own
// commit (hash or byte-identical code) never reaches the prompt via KB or
// rule provenance; degraded mode additionally drops everything from the
// task's repo. Writes report.json plus a review/ directory of
// (generated, ground-truth) diff pairs for manual semantic-equivalence
// judgment. The engine is needed only for the strategy-library approach.
BenchReport run_benchmark(const std::vector<BenchTask>& tasks, ApproachKind kind, bool degraded,
                          int repeats, CompletionProvider& provider,
                          const std::vector<CommitRecord>& knowledge_base,
                          const StrategyLibrary* lib, const PipelineConfig& config,
                          const std::string& out_dir);

} // namespace stratforge
